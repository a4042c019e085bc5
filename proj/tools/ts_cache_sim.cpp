// ts-cache-sim: runs the experiments and writes CSV (and SVG) reports.
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tscache/config.hpp"
#include "tscache/errors.hpp"
#include "tscache/experiments.hpp"

namespace {

enum ExitCode { ok = 0, failure = 1, config_error = 2, ingestion_error = 3, invariant_error = 4 };

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

std::uint64_t parse_seed_env(const char* text) {
    std::size_t pos = 0;
    const std::string s(text);
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos, 0);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (s.empty() || pos != s.size() || s.front() == '-') {
        throw tscache::ConfigError("TS_SIM_SEED is not a non-negative integer: '" + s + "'");
    }
    return v;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Timing-speculation cache read simulator"};
    app.require_subcommand(0, 1);
    app.fallthrough();

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<std::string> out_dir;
    std::optional<unsigned> threads;
    bool print_defaults = false;

    app.add_option("--config", config_path, "JSON config, merged over the built-in defaults")
        ->check(CLI::ExistingFile);
    app.add_option("--seed", seed, "master seed (TS_SIM_SEED overrides)");
    app.add_option("--trials", trials, "Monte-Carlo chips/arrays per operating point");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (0: all cores); output does not depend on it");
    app.add_flag("--print-defaults", print_defaults, "print the built-in default config and exit");

    auto* ber = app.add_subcommand("ber-sweep", "BER and DER against wordline enable time");
    auto* thr = app.add_subcommand("throughput", "read throughput gain over the margined design");
    auto* cmp = app.add_subcommand("compare", "latency, energy, area and EDP of the fault-tolerant schemes");
    auto* fom = app.add_subcommand("fom", "figure of merit of the timing-speculation SRAM designs");
    auto* trc = app.add_subcommand("trace", "run a read/write trace through one simulated cache");
    std::string trace_arg;
    std::optional<double> trace_vdd;
    trc->add_option("trace", trace_arg, "trace file, or traverse-55aa, or uniform-random(seed,n)")->required();
    trc->add_option("--vdd", trace_vdd, "operating point supply voltage (default: first operating point)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }

    if (print_defaults) {
        std::cout << tscache::default_config_text() << '\n';
        return ok;
    }
    if (app.get_subcommands().empty()) {
        std::cerr << app.help();
        return config_error;
    }

    try {
        tscache::ExperimentConfig cfg =
            config_path.empty() ? tscache::default_config() : tscache::load_config(config_path);
        if (seed) cfg.master_seed = *seed;
        if (const char* env = std::getenv("TS_SIM_SEED"); env != nullptr) cfg.master_seed = parse_seed_env(env);
        if (trials) {
            if (*trials == 0) throw tscache::ConfigError("--trials must be positive");
            cfg.trials = *trials;
        }
        if (out_dir) cfg.output_dir = *out_dir;
        if (threads) cfg.threads = *threads;
        cfg.validate();

        tscache::CommandOutput result;
        if (ber->parsed()) {
            result = tscache::cmd_ber_sweep(cfg);
        } else if (thr->parsed()) {
            result = tscache::cmd_throughput(cfg);
        } else if (cmp->parsed()) {
            result = tscache::cmd_compare(cfg);
        } else if (fom->parsed()) {
            result = tscache::cmd_fom(cfg);
        } else {
            const double vdd = trace_vdd.value_or(cfg.operating_points.front().vdd);
            cfg.operating_point(vdd);
            auto trace = tscache::builtin_trace(trace_arg, cfg.geometry.capacity,
                                                static_cast<std::uint32_t>(cfg.geometry.port_width / 8));
            if (!trace) trace = tscache::load_trace(trace_arg);
            result = tscache::cmd_trace(cfg, *trace, vdd);
        }

        const std::filesystem::path dir(cfg.output_dir);
        std::filesystem::create_directories(dir);
        write_file(dir / (result.name + ".csv"), result.csv);
        if (!result.svg.empty()) write_file(dir / (result.name + ".svg"), result.svg);
        std::cout << result.csv;
        return ok;
    } catch (const tscache::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const tscache::IngestionError& e) {
        std::cerr << "trace error: " << e.what() << '\n';
        return ingestion_error;
    } catch (const tscache::InvariantViolation& e) {
        std::cerr << "internal invariant violated: " << e.what() << '\n';
        return invariant_error;
    } catch (const tscache::ParameterError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return failure;
    }
}
