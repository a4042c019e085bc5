#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace tscache {

enum class ClockJitter { fixed_avg, uniform_min_max, per_chip_draw };

ClockJitter parse_jitter(std::string_view name);
std::string_view to_string(ClockJitter jitter) noexcept;

struct ClockRow {
    double vdd = 0.5;
    double avg_ns = 0.0;
    double max_ns = 0.0;
    double min_ns = 0.0;
};

// Replica-bitline clock: measured CK period statistics per supply voltage.
struct ClockModel {
    std::vector<ClockRow> rows;
    ClockJitter jitter = ClockJitter::fixed_avg;

    void validate() const;
    const ClockRow& row(double vdd) const;  // LookupError if absent
};

// Measured CK periods over 20 chips at 0.5-0.9 V.
ClockModel default_clock_model();

// fixed_avg -> avg. uniform_min_max -> U[min, max] keyed by chip_seed.
// per_chip_draw -> two-sided uniform around avg whose mean equals avg.
double ck_period(const ClockModel& model, double vdd, std::uint64_t chip_seed = 0);

// All signal timings are integer multiples of CK.
struct TimingConfig {
    int conv_cycles = 28;            // conventional (margined) wordline window
    int wl_enable_cycles = 17;       // speculative access window = base read cycles
    int sae1_cycle = 15;
    int sae2_cycle = 16;
    int dtc_cycle = 17;
    int extend_cycles_per_retry = 17;

    void validate() const;
};

struct TimingInstants {
    double t_sae1_ns = 0.0;
    double t_sae2_ns = 0.0;
    double t_dtc_ns = 0.0;
    double t_wl_end_ns = 0.0;
    double t_retry_step_ns = 0.0;
    double t_conv_wl_ns = 0.0;
};

TimingInstants timing_instants(const TimingConfig& cfg, double ck_ns);

struct SpeculativeDelays {
    double t_array_ns = 0.0;  // first speculative output
    double t_error_ns = 0.0;  // final confirmation
    double t_conv_ns = 0.0;   // conventional margined read
    double conv_over_error() const noexcept { return t_conv_ns / t_error_ns; }
};

SpeculativeDelays speculative_delays(const TimingConfig& cfg, double ck_ns, double sense_detect_overhead_ns);

// Cycle presets for the 128x32 and 512x32 arrays of the timing-speculation
// SRAM comparison (conv/error ratios 1.6 and ~1.78 with a one-CK overhead).
TimingConfig comparison_array_timing(int rows);

} // namespace tscache
