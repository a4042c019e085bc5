#include "tscache/experiments.hpp"

#include <cmath>

#include <fmt/core.h>

#include "tscache/array.hpp"
#include "tscache/errors.hpp"
#include "tscache/parallel.hpp"
#include "tscache/rng.hpp"

namespace tscache {

namespace {

std::string num(double v) { return format_number(v); }
std::string num(int v) { return std::to_string(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }

} // namespace

std::uint64_t vdd_seed(std::uint64_t master_seed, double vdd) noexcept {
    return derive_seed(master_seed, static_cast<std::uint64_t>(std::llround(vdd * 1000.0)));
}

CacheBuildParams cache_params(const ExperimentConfig& config, const OperatingPoint& point, double ck_ns) {
    CacheBuildParams p;
    p.geometry = config.geometry;
    p.options = config.cache;
    p.dist = config.distribution_for(point);
    p.offsets = config.offsets;
    p.k = config.sense.k();
    p.timing = config.timing_for(point.vdd);
    p.ck_ns = ck_ns;
    p.vdd_mv = point.vdd_mv();
    return p;
}

std::vector<BerSweepRow> ber_sweep(const ExperimentConfig& config) {
    config.validate();
    std::vector<BerSweepRow> rows;
    for (const auto& point : config.operating_points) {
        const auto dist = config.distribution_for(point);
        const auto& timing = config.timing_for(point.vdd);
        const double ck = config.clock.row(point.vdd).avg_ns;
        const int n = timing.conv_cycles + config.ber_sweep.extra_cycles;
        std::vector<double> times;
        for (int c = 1; c <= n; ++c) times.push_back(c * ck);

        const ArrayConfig acfg{config.ber_sweep.rows, config.ber_sweep.cols, config.geometry.port_width,
                               config.cache.max_extend_cycles, point.vdd_mv()};
        MeasureOptions opts;
        opts.k = config.sense.k();
        opts.threads = config.threads;
        const auto curve = measure_error_curve(dist, config.offsets, acfg, times, config.trials,
                                               vdd_seed(config.master_seed, point.vdd), opts);
        for (int c = 1; c <= n; ++c) {
            const auto& e = curve[static_cast<std::size_t>(c - 1)];
            rows.push_back(BerSweepRow{point.vdd, c, times[static_cast<std::size_t>(c - 1)], e.ber_plain(), e.ber(),
                                       e.der()});
        }
    }
    return rows;
}

CommandOutput cmd_ber_sweep(const ExperimentConfig& config) {
    const auto rows = ber_sweep(config);
    CsvTable t("ber-sweep", {"vdd", "discharge_time_ns", "ber_plain", "ber_cross_sense", "der"});
    std::vector<PlotSeries> series;
    for (const auto& r : rows) {
        t.add_row({num(r.vdd), num(r.discharge_time_ns), num(r.ber_plain), num(r.ber_cross_sense), num(r.der)});
        const std::string name = fmt::format("{}V cross-sense", format_number(r.vdd));
        if (series.empty() || series.back().name != name) {
            series.push_back({fmt::format("{}V plain", format_number(r.vdd)), {}, {}});
            series.push_back({name, {}, {}});
        }
        auto& plain = series[series.size() - 2];
        auto& cross = series.back();
        plain.x.push_back(r.discharge_time_ns);
        plain.y.push_back(r.ber_plain);
        cross.x.push_back(r.discharge_time_ns);
        cross.y.push_back(r.ber_cross_sense);
    }
    const std::string svg =
        render_svg(PlotSpec{"BER vs wordline enable time", "discharge time (ns)", "BER", true}, series);
    return CommandOutput{"ber-sweep", t.str(), svg};
}

std::vector<ThroughputRow> throughput(const ExperimentConfig& config) {
    config.validate();
    std::vector<ThroughputRow> rows;
    for (const auto& point : config.operating_points) {
        const auto& timing = config.timing_for(point.vdd);
        const double ck_avg = config.clock.row(point.vdd).avg_ns;
        const std::uint64_t root = vdd_seed(config.master_seed, point.vdd);
        const Trace trace = traverse_55aa(config.geometry.capacity, static_cast<std::uint32_t>(config.geometry.port_width / 8));

        struct ChipResult {
            CacheStats stats;
            double ck = 0.0;
            int disabled = 0;
        };
        std::vector<ChipResult> chips(config.trials);
        parallel_for(chips.size(), config.threads, [&](unsigned, std::size_t i) {
            const std::uint64_t seed = derive_seed(root, i);
            const double ck = ck_period(config.clock, point.vdd, seed);
            CacheInstance cache = build_cache(cache_params(config, point, ck), seed);
            chips[i] = ChipResult{run_trace(cache, trace), ck, cache.disabled_lines()};
        });

        CacheStats total;
        total.base_cycles = chips.front().stats.base_cycles;
        // CK-weighted read time: sum over chips of reads * ck and of extension cycles * ck.
        double read_ck = 0.0, extension_ck = 0.0;
        int disabled = 0;
        for (const auto& c : chips) {
            total.accesses += c.stats.accesses;
            total.hits += c.stats.hits;
            total.misses += c.stats.misses;
            total.read_hits += c.stats.read_hits;
            total.error_events += c.stats.error_events;
            total.ignored_error_events += c.stats.ignored_error_events;
            total.uncorrected_reads += c.stats.uncorrected_reads;
            total.extended_cycles_total += c.stats.extended_cycles_total;
            total.read_hit_cycles_total += c.stats.read_hit_cycles_total;
            const std::uint64_t base_total = c.stats.read_hits * static_cast<std::uint64_t>(c.stats.base_cycles);
            read_ck += static_cast<double>(c.stats.read_hits) * c.ck;
            extension_ck += static_cast<double>(c.stats.read_hit_cycles_total - base_total) * c.ck;
            disabled += c.disabled;
        }
        if (total.uncorrected_reads > 0) {
            throw InvariantViolation(fmt::format("{} uncorrected reads at {}V", total.uncorrected_reads, point.vdd));
        }
        ThroughputRow r;
        r.vdd = point.vdd;
        r.ck_ns = ck_avg;
        r.conv_cycles = timing.conv_cycles;
        r.conv_wl_ns = timing.conv_cycles * ck_avg;
        r.spec_cycles = timing.wl_enable_cycles;
        r.freq_boost = static_cast<double>(timing.conv_cycles) / timing.wl_enable_cycles;
        r.der = total.der_observed();
        r.avg_read_cycles = total.avg_read_cycles();
        // Both designs run on the same chip clock, so the gain is a ratio of CK-weighted cycles.
        r.gain = read_ck > 0.0 ? timing.conv_cycles / (total.base_cycles + extension_ck / read_ck) : 0.0;
        r.disabled_lines = disabled;
        rows.push_back(r);
    }
    return rows;
}

CommandOutput cmd_throughput(const ExperimentConfig& config) {
    CsvTable t("throughput", {"vdd", "ck_ns", "conv_cycles", "conv_wl_ns", "spec_cycles", "freq_boost", "der",
                              "avg_read_cycles", "gain", "disabled_lines"});
    for (const auto& r : throughput(config)) {
        t.add_row({num(r.vdd), num(r.ck_ns), num(r.conv_cycles), num(r.conv_wl_ns), num(r.spec_cycles),
                   num(r.freq_boost), num(r.der), num(r.avg_read_cycles), num(r.gain), num(r.disabled_lines)});
    }
    return CommandOutput{"throughput", t.str(), {}};
}

std::vector<CompareRow> compare(const ExperimentConfig& config) {
    config.validate();
    const SchemeModel* baseline = nullptr;
    for (const auto& s : config.schemes) {
        if (s.kind == SchemeKind::baseline6sigma) baseline = &s;
    }
    if (!baseline) throw ConfigError("missing config key 'schemes.baseline6sigma'");
    LatencyContext ctx;
    ctx.dist = config.distribution_for(config.calibration_for_vdd(config.scheme_calibration_vdd).point);
    ctx.discharge_fraction = config.discharge_latency_fraction;
    std::vector<CompareRow> rows;
    for (const auto& s : config.schemes) {
        const MetricReport m = evaluate(s, *baseline, ctx);
        rows.push_back(CompareRow{s.name(), m.avg_latency_ns, m});
    }
    return rows;
}

CommandOutput cmd_compare(const ExperimentConfig& config) {
    CsvTable t("compare", {"scheme", "latency", "latency_ns", "energy", "area", "edp", "residual_error"});
    for (const auto& r : compare(config)) {
        t.add_row({r.scheme, num(r.metrics.latency), num(r.latency_ns), num(r.metrics.energy_per_read),
                   num(r.metrics.area), num(r.metrics.edp), num(r.metrics.residual_error_prob)});
    }
    return CommandOutput{"compare", t.str(), {}};
}

std::vector<FomRow> fom_table(const std::vector<SpeculationSramRow>& rows) {
    std::vector<FomRow> out;
    for (const auto& r : rows) out.push_back(FomRow{r, row_fom(r)});
    return out;
}

CommandOutput cmd_fom(const ExperimentConfig& config) {
    config.validate();
    CsvTable t("fom", {"design", "rows", "area", "energy", "max_throughput", "fom", "published_fom"});
    for (const auto& r : fom_table(speculation_sram_table())) {
        t.add_row({r.input.design, num(r.input.rows), num(1.0 + r.input.area_overhead),
                   num(1.0 + r.input.energy_overhead), num(r.input.max_throughput), num(r.fom),
                   num(r.input.published_fom)});
    }
    return CommandOutput{"fom", t.str(), {}};
}

TraceRunRow trace_run(const ExperimentConfig& config, const Trace& trace, double vdd) {
    config.validate();
    const auto& point = config.operating_point(vdd);
    const std::uint64_t seed = derive_seed(vdd_seed(config.master_seed, vdd), 0);
    const double ck = ck_period(config.clock, vdd, seed);
    CacheInstance cache = build_cache(cache_params(config, point, ck), seed);
    TraceRunRow r;
    r.vdd = vdd;
    r.ck_ns = ck;
    r.stats = run_trace(cache, trace);
    r.disabled_lines = cache.disabled_lines();
    return r;
}

CommandOutput cmd_trace(const ExperimentConfig& config, const Trace& trace, double vdd) {
    const auto r = trace_run(config, trace, vdd);
    CsvTable t("trace", {"vdd", "ck_ns", "accesses", "hits", "misses", "read_hits", "error_events",
                         "ignored_error_events", "uncorrected_reads", "extended_cycles", "avg_read_cycles", "der",
                         "disabled_lines"});
    const auto& s = r.stats;
    t.add_row({num(r.vdd), num(r.ck_ns), num(s.accesses), num(s.hits), num(s.misses), num(s.read_hits),
               num(s.error_events), num(s.ignored_error_events), num(s.uncorrected_reads),
               num(s.extended_cycles_total), num(s.avg_read_cycles()), num(s.der_observed()),
               num(r.disabled_lines)});
    return CommandOutput{"trace", t.str(), {}};
}

} // namespace tscache
