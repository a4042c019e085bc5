#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tscache/cache.hpp"
#include "tscache/config.hpp"
#include "tscache/report.hpp"
#include "tscache/schemes.hpp"
#include "tscache/trace.hpp"

namespace tscache {

struct CommandOutput {
    std::string name;  // file stem
    std::string csv;
    std::string svg;   // empty when the command has no plot
};

struct BerSweepRow {
    double vdd = 0.0;
    int cycles = 0;
    double discharge_time_ns = 0.0;
    double ber_plain = 0.0;
    double ber_cross_sense = 0.0;
    double der = 0.0;
};

// One point per CK multiple 1..conv_cycles+extra_cycles for every operating point.
std::vector<BerSweepRow> ber_sweep(const ExperimentConfig& config);
CommandOutput cmd_ber_sweep(const ExperimentConfig& config);

struct ThroughputRow {
    double vdd = 0.0;
    double ck_ns = 0.0;
    int conv_cycles = 0;
    double conv_wl_ns = 0.0;
    int spec_cycles = 0;
    double freq_boost = 0.0;  // conv_cycles / spec_cycles
    double der = 0.0;
    double avg_read_cycles = 0.0;
    double gain = 0.0;
    int disabled_lines = 0;
};

// Per operating point: `trials` chips each run the traverse-55aa trace.
std::vector<ThroughputRow> throughput(const ExperimentConfig& config);
CommandOutput cmd_throughput(const ExperimentConfig& config);

struct CompareRow {
    std::string scheme;
    double latency_ns = 0.0;
    MetricReport metrics;
};

std::vector<CompareRow> compare(const ExperimentConfig& config);
CommandOutput cmd_compare(const ExperimentConfig& config);

struct FomRow {
    SpeculationSramRow input;
    double fom = 0.0;
};

std::vector<FomRow> fom_table(const std::vector<SpeculationSramRow>& rows);
CommandOutput cmd_fom(const ExperimentConfig& config);

struct TraceRunRow {
    double vdd = 0.0;
    double ck_ns = 0.0;
    CacheStats stats;
    int disabled_lines = 0;
};

// One chip built from master_seed at `vdd` runs the trace.
TraceRunRow trace_run(const ExperimentConfig& config, const Trace& trace, double vdd);
CommandOutput cmd_trace(const ExperimentConfig& config, const Trace& trace, double vdd);

// Seed root for everything measured at one supply voltage.
std::uint64_t vdd_seed(std::uint64_t master_seed, double vdd) noexcept;

CacheBuildParams cache_params(const ExperimentConfig& config, const OperatingPoint& point, double ck_ns);

} // namespace tscache
