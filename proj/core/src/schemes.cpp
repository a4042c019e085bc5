#include "tscache/schemes.hpp"

#include <cmath>
#include <limits>

#include "tscache/errors.hpp"

namespace tscache {

SchemeKind parse_scheme(std::string_view name) {
    if (name == "baseline6sigma") return SchemeKind::baseline6sigma;
    if (name == "ts_cache") return SchemeKind::ts_cache;
    if (name == "mixed_cell") return SchemeKind::mixed_cell;
    if (name == "zcal") return SchemeKind::zcal;
    if (name == "secded") return SchemeKind::secded;
    if (name == "olsc") return SchemeKind::olsc;
    throw ParameterError("unknown scheme '" + std::string(name) + "'");
}

std::string_view to_string(SchemeKind kind) noexcept {
    switch (kind) {
    case SchemeKind::baseline6sigma: return "baseline6sigma";
    case SchemeKind::ts_cache: return "ts_cache";
    case SchemeKind::mixed_cell: return "mixed_cell";
    case SchemeKind::zcal: return "zcal";
    case SchemeKind::secded: return "secded";
    case SchemeKind::olsc: return "olsc";
    }
    return "baseline6sigma";
}

void SchemeModel::validate() const {
    if (!(area_factor > 0.0 && energy_per_read_factor > 0.0 && capacity_factor > 0.0)) {
        throw ParameterError(name() + ": factors must be positive");
    }
    if (capacity_factor > 1.0) throw ParameterError(name() + ": capacity_factor exceeds 1");
    if (segment_bits <= 0 || check_bits < 0 || correctable_bits_per_segment < 0) {
        throw ParameterError(name() + ": bad segment geometry");
    }
    if (!(operating_ber >= 0.0 && operating_ber <= 1.0)) throw ParameterError(name() + ": operating_ber outside [0,1]");
    if (const auto* s = std::get_if<Speculative>(&latency)) {
        if (!(s->ber >= 0.0 && s->ber <= 1.0) || s->penalty_cycles < 0.0) {
            throw ParameterError(name() + ": bad speculative latency model");
        }
    }
}

std::vector<SchemeModel> default_schemes() {
    using K = SchemeKind;
    // Detect-and-retry schemes correct every flagged bit: correctable == segment_bits.
    return {
        {K::baseline6sigma, 1.0, 1.0, FixedMargin{6.0, 0.0}, 1.0, 0, 64, 0, 1e-9},
        {K::ts_cache, 1.037, 0.60, Speculative{3.0, 1e-3, 1.0, 0.0}, 1.0, 64, 64, 0, 1e-3},
        {K::mixed_cell, 1.50, 1.30, FixedMargin{3.0, 0.0}, 1.0, 1, 64, 8, 1e-3},
        {K::zcal, 1.30, 0.50, Speculative{3.0, 1e-3, 1.0, 12.0}, 1.0, 128, 128, 8, 1e-3},
        {K::secded, 1.31, 1.25, FixedMargin{3.0, 1.0}, 1.0, 1, 16, 5, 1e-3},
        {K::olsc, 2.00, 1.15, FixedMargin{3.0, 1.66}, 1.0, 4, 64, 64, 1e-3},
    };
}

double LatencyContext::non_discharge_ns() const noexcept {
    return dist.quantile_at_sigma(baseline_sigma) * (1.0 - discharge_fraction) / discharge_fraction;
}

double segment_error_rate(double ber, int bits) {
    return -std::expm1(static_cast<double>(bits) * std::log1p(-ber));
}

double avg_latency(const SchemeModel& scheme, const LatencyContext& ctx, double ber) {
    if (!(ctx.discharge_fraction > 0.0 && ctx.discharge_fraction <= 1.0)) {
        throw ParameterError("discharge_fraction must lie in (0, 1]");
    }
    if (const auto* m = std::get_if<FixedMargin>(&scheme.latency)) {
        return ctx.dist.quantile_at_sigma(m->sigma_level) + ctx.non_discharge_ns() + m->overhead_ns;
    }
    const auto& s = std::get<Speculative>(scheme.latency);
    if (!(ber >= 0.0 && ber <= 1.0)) throw ParameterError("ber outside [0, 1]");
    const double cycle = ctx.dist.quantile_at_sigma(s.sigma_level) + ctx.non_discharge_ns() + s.overhead_ns;
    return cycle * (1.0 + segment_error_rate(ber, scheme.segment_bits) * s.penalty_cycles);
}

double avg_latency(const SchemeModel& scheme, const LatencyContext& ctx) {
    const auto* s = std::get_if<Speculative>(&scheme.latency);
    return avg_latency(scheme, ctx, s ? s->ber : 0.0);
}

double binomial_tail(int n, int k, double p) {
    if (n < 0) throw ParameterError("binomial_tail: negative n");
    if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("binomial_tail: p outside [0, 1]");
    if (k < 0) return 1.0;
    if (k >= n || p == 0.0) return 0.0;
    if (p == 1.0) return 1.0;
    const double lp = std::log(p);
    const double lq = std::log1p(-p);
    const double lnf = std::lgamma(n + 1.0);
    double sum = 0.0;
    for (int i = n; i > k; --i) {  // smallest terms first
        sum += std::exp(lnf - std::lgamma(i + 1.0) - std::lgamma(n - i + 1.0) + i * lp + (n - i) * lq);
    }
    return std::min(sum, 1.0);
}

double residual_error(const SchemeModel& scheme, double ber, SegmentConvention convention) {
    const int n = convention == SegmentConvention::data_bits ? scheme.segment_bits
                                                              : scheme.segment_bits + scheme.check_bits;
    return binomial_tail(n, scheme.correctable_bits_per_segment, ber);
}

double edp(const MetricReport& scheme_report, const MetricReport& baseline_report) {
    return (scheme_report.energy_per_read * scheme_report.avg_latency_ns) /
           (baseline_report.energy_per_read * baseline_report.avg_latency_ns);
}

MetricReport evaluate(const SchemeModel& scheme, const SchemeModel& baseline, const LatencyContext& ctx) {
    scheme.validate();
    baseline.validate();
    MetricReport base;
    base.avg_latency_ns = avg_latency(baseline, ctx);
    base.energy_per_read = baseline.energy_per_read_factor;

    MetricReport r;
    r.avg_latency_ns = avg_latency(scheme, ctx);
    r.latency = r.avg_latency_ns / base.avg_latency_ns;
    r.energy_per_read = scheme.energy_per_read_factor / baseline.energy_per_read_factor;
    r.area = scheme.area_factor / baseline.area_factor;
    r.edp = edp(MetricReport{r.avg_latency_ns, 0, scheme.energy_per_read_factor, 0, 0, 0}, base);
    r.residual_error_prob = residual_error(scheme, scheme.operating_ber);
    return r;
}

double fom(double max_throughput, double area, double energy) {
    if (!(max_throughput > 0.0 && area > 0.0 && energy > 0.0)) {
        throw ParameterError("fom: inputs must be positive");
    }
    return max_throughput / (area * energy);
}

double swing_scaled_energy(double discharge_energy_share, double discharge_ratio, double der, double penalty_cycles,
                           double detector_overhead) {
    return (1.0 - discharge_energy_share) + discharge_energy_share * discharge_ratio * (1.0 + der * penalty_cycles) +
           detector_overhead;
}

std::vector<SpeculationSramRow> speculation_sram_table() {
    return {
        {"shadow_sa", 128, 32, 0.176, 0.526, 1.0, 1.5, 0.83},
        {"shadow_sa", 512, 32, 0.048, 0.179, 1.0, 1.5, 1.21},
        {"razor_sram", 128, 32, 0.451, 0.565, 1.0, 2.0, 0.88},
        {"razor_sram", 512, 32, 0.501, 0.190, 1.0, 2.0, 1.13},
        {"ds_sbvr", 128, 32, 0.208, 0.342, 1.57, 1.57, 0.97},
        {"ds_sbvr", 512, 32, 0.076, 0.101, 1.78, 1.78, 1.50},
        {"cross_sensing", 128, 32, 0.064, 0.123, 1.6, 1.6, 1.34},
        {"cross_sensing", 512, 32, 0.018, -0.188, 1.78, 1.78, 2.15},
    };
}

double row_fom(const SpeculationSramRow& row) {
    return fom(row.max_throughput, 1.0 + row.area_overhead, 1.0 + row.energy_overhead);
}

TailConvention find_tail_convention(double target, int data_bits, int check_bits, std::vector<double> ber_candidates,
                                    int max_threshold) {
    if (!(target > 0.0)) throw ParameterError("find_tail_convention: target must be positive");
    TailConvention best;
    double best_dist = std::numeric_limits<double>::infinity();
    for (auto conv : {SegmentConvention::data_bits, SegmentConvention::data_and_check_bits}) {
        const int n = conv == SegmentConvention::data_bits ? data_bits : data_bits + check_bits;
        for (double ber : ber_candidates) {
            for (int thr = 0; thr <= max_threshold; ++thr) {
                const double v = binomial_tail(n, thr, ber);
                if (!(v > 0.0)) continue;
                const double d = std::abs(std::log(v / target));
                if (d < best_dist) {
                    best_dist = d;
                    best = TailConvention{conv, n, thr, ber, v};
                }
            }
        }
    }
    return best;
}

} // namespace tscache
