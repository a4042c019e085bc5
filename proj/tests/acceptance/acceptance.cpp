// Acceptance suite: one PASS/FAIL line per criterion.
// Usage: acceptance [path-to-ts-cache-sim]  (criterion 11 needs the CLI)
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <fmt/core.h>

#include "../support/oracles.hpp"
#include "tscache/array.hpp"
#include "tscache/config.hpp"
#include "tscache/experiments.hpp"
#include "tscache/schemes.hpp"
#include "tscache/senseamp.hpp"
#include "tscache/timing.hpp"
#include "tscache/variation.hpp"

using namespace tscache;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string g_cli;

Outcome calibration_fidelity() {
    const auto start = std::chrono::steady_clock::now();
    const auto d = calibrate(7.4, 2.36, 150.0);
    RngStream rng(20240601);
    const int n = 1000000;
    double sum = 0.0, sum2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double t = sample_cell(d, 1, rng).t150_ns;
        sum += t;
        sum2 += t * t;
    }
    const double mean = sum / n;
    const double sd = std::sqrt((sum2 - n * mean * mean) / (n - 1));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool ok = std::abs(mean / 7.4 - 1) <= 0.005 && std::abs(sd / 2.36 - 1) <= 0.01 && secs < 10.0;
    return {ok, fmt::format("mean {:.4f} ns, stddev {:.4f} ns over 1e6 samples in {:.2f} s", mean, sd, secs)};
}

Outcome discharge_reduction() {
    const auto d = calibrate(7.4, 2.36, 150.0);
    const double q3 = d.quantile_at_sigma(3), q6 = d.quantile_at_sigma(6);
    // independent check of the quantiles by CDF bisection
    const bool quantiles_agree = std::abs(q3 / oracle::lognormal_quantile(d.mu, d.sigma, 3) - 1) < 1e-9 &&
                                 std::abs(q6 / oracle::lognormal_quantile(d.mu, d.sigma, 6) - 1) < 1e-9;
    const double reduction = 1.0 - q3 / q6;
    return {quantiles_agree && std::abs(reduction - 0.60) <= 0.08,
            fmt::format("3 sigma {:.3f} ns, 6 sigma {:.3f} ns, reduction {:.1f}%", q3, q6, 100 * reduction)};
}

Outcome no_false_negatives() {
    long cases = 0, violations = 0, weak_unflagged = 0;
    for (double k : {0.5, 0.9, 0.9802, 1.0}) {
        for (int v1 = -500; v1 <= 500; ++v1) {
            for (int os = -250; os <= 250; ++os) {
                ++cases;
                const auto ev = cross_sense(v1, os, k);
                if (!ev.error && v1 != 0 && ev.q1 != (v1 > 0 ? 1 : 0)) ++violations;
                if (!ev.error && v1 == 0) ++violations;  // no sign, nothing to confirm
                if (std::abs(v1) < std::abs(os) && !ev.error) ++weak_unflagged;
            }
        }
    }
    // Same grid through the capacitance form at the chip's symmetric values.
    const ChargeShareParams caps{50, 50, 0.5, 0.5};
    for (int v1 = -500; v1 <= 500; ++v1) {
        for (int os = -250; os <= 250; ++os) {
            ++cases;
            const auto ev = cross_sense(v1, SenseAmp(os, 500), caps);
            if (!ev.error && (v1 == 0 || ev.q1 != (v1 > 0 ? 1 : 0))) ++violations;
            if (std::abs(v1) < std::abs(os) && !ev.error) ++weak_unflagged;
        }
    }
    return {violations == 0 && weak_unflagged == 0,
            fmt::format("{} grid cases, {} wrong confirmations, {} unflagged weak cases", cases, violations,
                        weak_unflagged)};
}

Outcome charge_sharing_algebra() {
    RngStream rng(4);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double c_bl = 1.0 + 199.0 * rng.uniform();
        const double c_in = c_bl * (0.0001 + 0.5 * rng.uniform());
        const ChargeShareParams p{c_bl, c_bl, c_in, c_in};
        const double v_bl = 500.0 * rng.uniform();
        double v_blb = 500.0 * rng.uniform();
        const double eq1 = charge_share(v_bl, v_blb, p);
        const double eq2 = -shrink_factor(p) * (v_bl - v_blb);
        worst = std::max(worst, std::abs(eq1 - eq2) / std::abs(eq2));
    }
    const double k = shrink_factor({50, 50, 0.5, 0.5});
    const bool ok = worst <= 1e-12 && std::abs(k - 0.980198) < 5e-7;
    return {ok, fmt::format("worst relative gap {:.2e} over 1e4 tuples; k(50, 0.5) = {:.6f}", worst, k)};
}

Outcome der_ber_law() {
    const auto d = calibrate(7.4, 2.36);
    const double k = shrink_factor({50, 50, 0.5, 0.5});
    const double t = oracle::time_for_flag_rate(1e-3, d.mu, d.sigma, 50.0, k);
    const ArrayConfig cfg{1, 64, 64, 4, 500};
    MeasureOptions opt;
    opt.k = k;
    opt.threads = 0;
    const auto e = measure_ber_der(d, OffsetModel{50.0}, cfg, t, 1000000, 2024, opt);
    const double p = e.ber();
    const double expect = 1.0 - std::pow(1.0 - p, 64);
    const double se = std::sqrt(e.der() * (1 - e.der()) / static_cast<double>(e.segments));
    const bool ok = std::abs(e.der() - expect) <= 3 * se && std::abs(p / 1e-3 - 1) < 0.05;
    return {ok, fmt::format("t = {:.3f} ns, p = {:.4e}, DER {:.5f} vs 1-(1-p)^64 = {:.5f} (3 SE = {:.5f}, {} segments)",
                            t, p, e.der(), expect, 3 * se, e.segments)};
}

Outcome fom_arithmetic() {
    double worst = 0.0;
    std::string values;
    for (const auto& r : fom_table(speculation_sram_table())) {
        worst = std::max(worst, std::abs(r.fom - r.input.published_fom));
        values += fmt::format("{}{:.3f}", values.empty() ? "" : " ", r.fom);
    }
    return {worst <= 0.02, fmt::format("FoM {}; worst gap {:.4f}", values, worst)};
}

Outcome conventional_margin() {
    const auto cfg = default_config();
    const auto t05 = timing_instants(cfg.timing_for(0.5), cfg.clock.row(0.5).avg_ns).t_conv_wl_ns;
    const auto t06 = timing_instants(cfg.timing_for(0.6), cfg.clock.row(0.6).avg_ns).t_conv_wl_ns;
    const bool ok = t05 == 28 * 0.687 && t06 == 20 * 0.265 && std::abs(t05 - 19.236) < 1e-12 &&
                    std::abs(t06 - 5.30) < 1e-12;
    return {ok, fmt::format("28 x 0.687 = {:.6f} ns, 20 x 0.265 = {:.6f} ns", t05, t06)};
}

Outcome throughput_anchors() {
    const auto rows = throughput(default_config());
    const ThroughputRow *r05 = nullptr, *r06 = nullptr;
    for (const auto& r : rows) {
        if (r.vdd == 0.5) r05 = &r;
        if (r.vdd == 0.6) r06 = &r;
    }
    if (!r05 || !r06) return {false, "default config lacks the 0.5V or 0.6V row"};
    const bool ok = std::abs(r06->gain - 1.77) <= 0.1 && std::abs(r05->freq_boost - 1.6) <= 0.1 &&
                    std::abs(r06->freq_boost - 1.9) <= 0.1;
    return {ok, fmt::format("0.6V gain {:.3f} (DER {:.4f}); boost 0.5V {:.3f}, 0.6V {:.3f}; 0.5V gain {:.3f} (DER {:.4f})",
                            r06->gain, r06->der, r05->freq_boost, r06->freq_boost, r05->gain, r05->der)};
}

Outcome edp_comparison() {
    double ts = 0, olsc = 0, olsc_area = 0;
    for (const auto& r : compare(default_config())) {
        if (r.scheme == "ts_cache") ts = r.metrics.edp;
        if (r.scheme == "olsc") olsc = r.metrics.edp, olsc_area = r.metrics.area;
    }
    const bool ok = std::abs(ts - 0.31) <= 0.03 && std::abs(olsc - 0.59) <= 0.05 && std::abs(olsc_area - 2.0) <= 0.05;
    return {ok, fmt::format("TS EDP {:.4f}, OLSC EDP {:.4f}, OLSC area {:.3f}", ts, olsc, olsc_area)};
}

Outcome false_positive_behaviour() {
    const auto cfg = default_config();
    const auto& point = cfg.operating_point(0.5);
    const auto d = cfg.distribution_for(point);
    const double ck = cfg.clock.row(0.5).avg_ns;
    const double q3 = d.quantile_at_sigma(3);
    std::vector<double> times;
    for (int c = 1; c * ck < q3; ++c) times.push_back(c * ck);
    times.push_back(q3);
    const ArrayConfig acfg{256, 128, 64, 4, point.vdd_mv()};
    const std::uint64_t trials = 60;

    MeasureOptions opt;
    opt.k = cfg.sense.k();
    const auto curve = measure_error_curve(d, cfg.offsets, acfg, times, trials, 7, opt);
    bool positive = true, monotone = true;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        positive = positive && curve[i].false_positive_rate() > 0.0;
        if (i) monotone = monotone && curve[i].false_positive_rate() <= curve[i - 1].false_positive_rate();
    }
    const double fp_at_q3 = curve.back().false_positive_rate();
    const bool part_a = positive && monotone && fp_at_q3 <= 1e-3;

    // (b) same arrays, k swept: removing attenuation never adds false positives.
    bool part_b = true;
    MeasureOptions no_att = opt;
    no_att.k = 1.0;
    const auto base = measure_error_curve(d, cfg.offsets, acfg, times, 8, 11, no_att);
    for (double k : {0.5, 0.8, 0.9, 0.9802, 0.999}) {
        MeasureOptions o = opt;
        o.k = k;
        const auto c = measure_error_curve(d, cfg.offsets, acfg, times, 8, 11, o);
        for (std::size_t i = 0; i < c.size(); ++i) {
            part_b = part_b && base[i].false_positive_bits <= c[i].false_positive_bits;
        }
    }
    return {part_a && part_b,
            fmt::format("(a) positive {}, nonincreasing {}, added BER {:.2e} at {:.2f} ns (3 sigma point); "
                        "(b) k=1 has the fewest false positives at every time {}",
                        positive, monotone, fp_at_q3, q3, part_b)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome cli_determinism() {
    if (g_cli.empty()) return {false, "no CLI path given"};
    const fs::path root = fs::temp_directory_path() / fmt::format("tscache-accept-{}", ::getpid());
    fs::create_directories(root);
    {
        std::ofstream trace(root / "trace.txt");
        trace << "# small trace\nW 0x40 0x1234\nR 0x40\nW 0x8040 0xffff\nR 0x8040\nR 0x40\nR 0x10000\n";
    }
    const std::vector<std::string> commands = {"ber-sweep", "throughput", "compare", "fom",
                                               "trace " + (root / "trace.txt").string(),
                                               "trace 'uniform-random(9,20000)' --vdd 0.6"};
    int mismatches = 0, failures = 0;
    for (std::size_t ci = 0; ci < commands.size(); ++ci) {
        std::vector<std::string> outputs;
        for (const char* threads : {"1", "3", "1"}) {
            const fs::path dir = root / fmt::format("c{}_{}_{}", ci, threads, outputs.size());
            const std::string cmd = fmt::format("\"{}\" {} --seed 17 --threads {} --out \"{}\" > \"{}\"", g_cli,
                                                commands[ci], threads, dir.string(), (dir.string() + ".stdout"));
            fs::create_directories(dir);
            if (std::system(cmd.c_str()) != 0) {
                ++failures;
                continue;
            }
            std::string all = slurp(dir.string() + ".stdout");
            std::vector<fs::path> files;
            for (const auto& f : fs::directory_iterator(dir)) files.push_back(f.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) all += "\n--" + f.filename().string() + "--\n" + slurp(f);
            outputs.push_back(all);
        }
        for (std::size_t i = 1; i < outputs.size(); ++i) mismatches += outputs[i] != outputs[0];
    }
    std::error_code ec;
    fs::remove_all(root, ec);
    return {mismatches == 0 && failures == 0,
            fmt::format("{} commands x 3 runs (threads 1/3/1): {} mismatches, {} failed runs", commands.size(),
                        mismatches, failures)};
}

} // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli = argv[1];
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"calibration fidelity", calibration_fidelity},
        {"60% discharge-time reduction", discharge_reduction},
        {"no-false-negative theorem", no_false_negatives},
        {"charge-sharing algebra", charge_sharing_algebra},
        {"DER/BER law", der_ber_law},
        {"FoM arithmetic", fom_arithmetic},
        {"conventional-margin arithmetic", conventional_margin},
        {"throughput anchors", throughput_anchors},
        {"EDP comparison", edp_comparison},
        {"false-positive behaviour", false_positive_behaviour},
        {"determinism", cli_determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += o.pass ? 0 : 1;
        std::cout << fmt::format("criterion {:>2} {}: {} ({})", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                                 o.detail)
                  << std::endl;
    }
    std::cout << fmt::format("{} of {} criteria passed", criteria.size() - failed, criteria.size()) << std::endl;
    return failed == 0 ? 0 : 1;
}
