#include "tscache/timing.hpp"

#include <cmath>
#include <string>

#include "tscache/errors.hpp"
#include "tscache/rng.hpp"

namespace tscache {

ClockJitter parse_jitter(std::string_view name) {
    if (name == "fixed_avg") return ClockJitter::fixed_avg;
    if (name == "uniform_min_max") return ClockJitter::uniform_min_max;
    if (name == "per_chip_draw") return ClockJitter::per_chip_draw;
    throw ParameterError("unknown clock jitter model '" + std::string(name) + "'");
}

std::string_view to_string(ClockJitter jitter) noexcept {
    switch (jitter) {
    case ClockJitter::fixed_avg: return "fixed_avg";
    case ClockJitter::uniform_min_max: return "uniform_min_max";
    case ClockJitter::per_chip_draw: return "per_chip_draw";
    }
    return "fixed_avg";
}

void ClockModel::validate() const {
    for (const auto& r : rows) {
        if (!(r.min_ns > 0.0 && r.min_ns <= r.avg_ns && r.avg_ns <= r.max_ns)) {
            throw ParameterError("clock row at " + std::to_string(r.vdd) +
                                 " V violates 0 < min <= avg <= max");
        }
    }
}

const ClockRow& ClockModel::row(double vdd) const {
    for (const auto& r : rows) {
        if (std::abs(r.vdd - vdd) < 1e-9) return r;
    }
    throw LookupError("no CK period row for vdd " + std::to_string(vdd) + " V");
}

ClockModel default_clock_model() {
    ClockModel m;
    m.rows = {
        {0.5, 0.687, 0.744, 0.658},
        {0.6, 0.265, 0.279, 0.254},
        {0.7, 0.167, 0.172, 0.161},
        {0.8, 0.122, 0.125, 0.119},
        {0.9, 0.099, 0.108, 0.096},
    };
    return m;
}

double ck_period(const ClockModel& model, double vdd, std::uint64_t chip_seed) {
    const ClockRow& r = model.row(vdd);
    switch (model.jitter) {
    case ClockJitter::fixed_avg:
        return r.avg_ns;
    case ClockJitter::uniform_min_max: {
        RngStream rng(chip_seed);
        return r.min_ns + (r.max_ns - r.min_ns) * rng.uniform();
    }
    case ClockJitter::per_chip_draw: {
        if (r.max_ns == r.min_ns) return r.avg_ns;
        RngStream rng(chip_seed);
        const double p_low = (r.max_ns - r.avg_ns) / (r.max_ns - r.min_ns);
        const double side = rng.uniform();
        const double u = rng.uniform();
        return side < p_low ? r.min_ns + (r.avg_ns - r.min_ns) * u
                            : r.avg_ns + (r.max_ns - r.avg_ns) * u;
    }
    }
    return r.avg_ns;
}

void TimingConfig::validate() const {
    if (conv_cycles <= 0 || wl_enable_cycles <= 0 || sae1_cycle <= 0 || extend_cycles_per_retry <= 0) {
        throw ParameterError("timing cycle counts must be positive");
    }
    if (sae1_cycle > wl_enable_cycles) throw ParameterError("sae1_cycle exceeds wl_enable_cycles");
    if (sae2_cycle <= sae1_cycle) throw ParameterError("sae2_cycle must follow sae1_cycle");
    if (dtc_cycle < sae2_cycle) throw ParameterError("dtc_cycle precedes sae2_cycle");
    if (dtc_cycle > wl_enable_cycles) throw ParameterError("dtc_cycle exceeds wl_enable_cycles");
}

TimingInstants timing_instants(const TimingConfig& cfg, double ck_ns) {
    cfg.validate();
    if (!(ck_ns > 0.0)) throw ParameterError("CK period must be positive");
    TimingInstants t;
    t.t_sae1_ns = static_cast<double>(cfg.sae1_cycle) * ck_ns;
    t.t_sae2_ns = static_cast<double>(cfg.sae2_cycle) * ck_ns;
    t.t_dtc_ns = static_cast<double>(cfg.dtc_cycle) * ck_ns;
    t.t_wl_end_ns = static_cast<double>(cfg.wl_enable_cycles) * ck_ns;
    t.t_retry_step_ns = static_cast<double>(cfg.extend_cycles_per_retry) * ck_ns;
    t.t_conv_wl_ns = static_cast<double>(cfg.conv_cycles) * ck_ns;
    return t;
}

SpeculativeDelays speculative_delays(const TimingConfig& cfg, double ck_ns, double sense_detect_overhead_ns) {
    const TimingInstants t = timing_instants(cfg, ck_ns);
    SpeculativeDelays d;
    d.t_array_ns = t.t_sae1_ns + sense_detect_overhead_ns;
    d.t_error_ns = t.t_dtc_ns + sense_detect_overhead_ns;
    d.t_conv_ns = t.t_conv_wl_ns + sense_detect_overhead_ns;
    return d;
}

TimingConfig comparison_array_timing(int rows) {
    switch (rows) {
    case 128: return TimingConfig{15, 9, 7, 8, 9, 9};
    case 512: return TimingConfig{24, 13, 11, 12, 13, 13};
    default:
        throw LookupError("no comparison timing preset for " + std::to_string(rows) + " rows");
    }
}

} // namespace tscache
