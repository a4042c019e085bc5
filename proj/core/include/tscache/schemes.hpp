#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tscache/variation.hpp"

namespace tscache {

enum class SchemeKind { baseline6sigma, ts_cache, mixed_cell, zcal, secded, olsc };

SchemeKind parse_scheme(std::string_view name);
std::string_view to_string(SchemeKind kind) noexcept;

// Wordline timed to a sigma-level quantile of the discharge distribution,
// plus fixed extra delay (e.g. ECC decode).
struct FixedMargin {
    double sigma_level = 6.0;
    double overhead_ns = 0.0;
};

// Wordline timed aggressively; segments that flag pay `penalty_cycles`
// additional access cycles.
struct Speculative {
    double sigma_level = 3.0;
    double ber = 1e-3;
    double penalty_cycles = 1.0;
    double overhead_ns = 0.0;
};

using LatencyModel = std::variant<FixedMargin, Speculative>;

struct SchemeModel {
    SchemeKind kind = SchemeKind::baseline6sigma;
    double area_factor = 1.0;
    double energy_per_read_factor = 1.0;
    LatencyModel latency = FixedMargin{};
    double capacity_factor = 1.0;
    int correctable_bits_per_segment = 0;
    int segment_bits = 64;   // data bits per protected segment
    int check_bits = 0;
    double operating_ber = 1e-3;

    void validate() const;
    std::string name() const { return std::string(to_string(kind)); }
};

// Overhead parameter sets for the six compared caches.
std::vector<SchemeModel> default_schemes();

// Shared inputs for latency: the discharge distribution and the fraction of the
// baseline read latency spent discharging bitlines.
struct LatencyContext {
    DischargeDistribution dist;
    double discharge_fraction = 0.854;
    double baseline_sigma = 6.0;

    double non_discharge_ns() const noexcept;
};

// 1 - (1 - ber)^bits.
double segment_error_rate(double ber, int bits);

// Average read latency in ns.
double avg_latency(const SchemeModel& scheme, const LatencyContext& ctx);
// Same, with the speculative scheme's BER replaced by `ber`.
double avg_latency(const SchemeModel& scheme, const LatencyContext& ctx, double ber);

// P(X > k) for X ~ Binomial(n, p), summed term by term from the tail.
double binomial_tail(int n, int k, double p);

enum class SegmentConvention { data_bits, data_and_check_bits };

// Probability that a protected segment holds more errors than the scheme corrects.
double residual_error(const SchemeModel& scheme, double ber,
                      SegmentConvention convention = SegmentConvention::data_bits);

struct MetricReport {
    double avg_latency_ns = 0.0;
    double latency = 1.0;  // relative to baseline
    double energy_per_read = 1.0;
    double area = 1.0;
    double edp = 1.0;
    double residual_error_prob = 0.0;
};

// (energy * latency) / (baseline energy * baseline latency).
double edp(const MetricReport& scheme_report, const MetricReport& baseline_report);

MetricReport evaluate(const SchemeModel& scheme, const SchemeModel& baseline, const LatencyContext& ctx);

// max_throughput / (area * energy).
double fom(double max_throughput, double area, double energy);

// Read energy relative to a baseline whose bitline discharge accounts for
// `discharge_energy_share` of the total: the discharge part scales with the
// discharge-time ratio and the expected number of sensing phases.
double swing_scaled_energy(double discharge_energy_share, double discharge_ratio, double der,
                           double penalty_cycles, double detector_overhead);

struct SpeculationSramRow {
    std::string design;
    int rows = 128;
    int cols = 32;
    double area_overhead = 0.0;    // fractional
    double energy_overhead = 0.0;  // fractional, negative means savings
    double conv_over_error = 1.0;
    double max_throughput = 1.0;
    double published_fom = 1.0;
};

// The eight array comparison rows (two sizes each for four designs).
std::vector<SpeculationSramRow> speculation_sram_table();

double row_fom(const SpeculationSramRow& row);

// Which (segment bits, tail threshold, BER) reproduces a quoted residual-error
// constant. Searches thresholds [0, max_threshold] and the given BER candidates
// for both segment conventions; returns the closest match in log space.
struct TailConvention {
    SegmentConvention convention = SegmentConvention::data_bits;
    int n = 0;
    int threshold = 0;  // P(X > threshold)
    double ber = 0.0;
    double value = 0.0;
};

TailConvention find_tail_convention(double target, int data_bits, int check_bits, std::vector<double> ber_candidates,
                                    int max_threshold = 8);

} // namespace tscache
