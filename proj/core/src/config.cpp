#include "tscache/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "tscache/errors.hpp"

namespace tscache {

using nlohmann::json;

namespace {

// Free calibration choices (offset sigma, the 0.6-0.8 V rows, cycle counts)
// are documented in the README.
const char* const kDefaults = R"json({
  "operating_points": [
    {"vdd": 0.5, "corner": "SS", "temperature_c": 0},
    {"vdd": 0.6, "corner": "TT", "temperature_c": 25}
  ],
  "calibration": [
    {"vdd": 0.5, "corner": "SS", "temperature_c": 0,  "mean_ns": 7.4,   "stddev_ns": 2.36, "reference_swing_mv": 150},
    {"vdd": 0.6, "corner": "TT", "temperature_c": 25, "mean_ns": 1.7,   "stddev_ns": 0.45, "reference_swing_mv": 150},
    {"vdd": 0.7, "corner": "TT", "temperature_c": 25, "mean_ns": 0.75,  "stddev_ns": 0.15, "reference_swing_mv": 150},
    {"vdd": 0.8, "corner": "TT", "temperature_c": 25, "mean_ns": 0.40,  "stddev_ns": 0.06, "reference_swing_mv": 150},
    {"vdd": 0.9, "corner": "SS", "temperature_c": 0,  "mean_ns": 0.135, "stddev_ns": 0.01, "reference_swing_mv": 150}
  ],
  "offset_sigma_mv": 50,
  "charge_share": {"c_bl_ff": 50, "c_blb_ff": 50, "c_in_ff": 0.5, "c_inb_ff": 0.5, "k_override": null},
  "clock": {
    "jitter": "fixed_avg",
    "periods": [
      {"vdd": 0.5, "avg_ns": 0.687, "max_ns": 0.744, "min_ns": 0.658},
      {"vdd": 0.6, "avg_ns": 0.265, "max_ns": 0.279, "min_ns": 0.254},
      {"vdd": 0.7, "avg_ns": 0.167, "max_ns": 0.172, "min_ns": 0.161},
      {"vdd": 0.8, "avg_ns": 0.122, "max_ns": 0.125, "min_ns": 0.119},
      {"vdd": 0.9, "avg_ns": 0.099, "max_ns": 0.108, "min_ns": 0.096}
    ]
  },
  "timing": [
    {"vdd": 0.5, "conv_cycles": 28, "wl_enable_cycles": 17, "sae1_cycle": 15, "sae2_cycle": 16, "dtc_cycle": 17, "extend_cycles_per_retry": 17},
    {"vdd": 0.6, "conv_cycles": 20, "wl_enable_cycles": 11, "sae1_cycle": 9,  "sae2_cycle": 10, "dtc_cycle": 11, "extend_cycles_per_retry": 11}
  ],
  "geometry": {
    "capacity": 32768, "ways": 2, "line_size": 64,
    "data_arrays": 8, "data_rows": 256, "data_cols": 128,
    "tag_arrays": 4, "tag_rows": 64, "tag_cols": 64, "tag_bits": 32,
    "port_width": 64
  },
  "cache": {
    "miss_penalty_cycles": 20, "overlap": false, "tag_cross_sensing": true,
    "tag_time_scale": 0.25, "max_extend_cycles": 4
  },
  "schemes": {
    "baseline6sigma": {"area_factor": 1.0, "energy_per_read_factor": 1.0, "capacity_factor": 1.0,
                       "latency": {"model": "fixed_margin", "sigma_level": 6, "overhead_ns": 0},
                       "correctable_bits_per_segment": 0, "segment_bits": 64, "check_bits": 0, "operating_ber": 1e-9},
    "ts_cache":       {"area_factor": 1.037, "energy_per_read_factor": 0.60, "capacity_factor": 1.0,
                       "latency": {"model": "speculative", "sigma_level": 3, "ber": 1e-3, "penalty_cycles": 1, "overhead_ns": 0},
                       "correctable_bits_per_segment": 64, "segment_bits": 64, "check_bits": 0, "operating_ber": 1e-3},
    "mixed_cell":     {"area_factor": 1.5, "energy_per_read_factor": 1.30, "capacity_factor": 1.0,
                       "latency": {"model": "fixed_margin", "sigma_level": 3, "overhead_ns": 0},
                       "correctable_bits_per_segment": 1, "segment_bits": 64, "check_bits": 8, "operating_ber": 1e-3},
    "zcal":           {"area_factor": 1.3, "energy_per_read_factor": 0.50, "capacity_factor": 1.0,
                       "latency": {"model": "speculative", "sigma_level": 3, "ber": 1e-3, "penalty_cycles": 1, "overhead_ns": 12},
                       "correctable_bits_per_segment": 128, "segment_bits": 128, "check_bits": 8, "operating_ber": 1e-3},
    "secded":         {"area_factor": 1.31, "energy_per_read_factor": 1.25, "capacity_factor": 1.0,
                       "latency": {"model": "fixed_margin", "sigma_level": 3, "overhead_ns": 1.0},
                       "correctable_bits_per_segment": 1, "segment_bits": 16, "check_bits": 5, "operating_ber": 1e-3},
    "olsc":           {"area_factor": 2.0, "energy_per_read_factor": 1.15, "capacity_factor": 1.0,
                       "latency": {"model": "fixed_margin", "sigma_level": 3, "overhead_ns": 1.66},
                       "correctable_bits_per_segment": 4, "segment_bits": 64, "check_bits": 64, "operating_ber": 1e-3}
  },
  "scheme_calibration_vdd": 0.5,
  "discharge_latency_fraction": 0.854,
  "discharge_energy_fraction": 0.708,
  "sense_detect_overhead_cycles": 1,
  "ber_sweep": {"rows": 256, "cols": 128, "extra_cycles": 4},
  "trials": 20,
  "master_seed": 1,
  "output_dir": "out",
  "threads": 0
})json";

template <typename T>
T field(const json& obj, const std::string& key, const std::string& path) {
    const std::string full = path.empty() ? key : path + "." + key;
    if (!obj.is_object() || !obj.contains(key)) throw ConfigError("missing config key '" + full + "'");
    try {
        return obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError("invalid value for config key '" + full + "'");
    }
}

const json& array_field(const json& obj, const std::string& key) {
    if (!obj.contains(key) || !obj.at(key).is_array()) throw ConfigError("config key '" + key + "' must be an array");
    return obj.at(key);
}

OperatingPoint read_point(const json& j, const std::string& path) {
    OperatingPoint p;
    p.vdd = field<double>(j, "vdd", path);
    p.temperature_c = field<double>(j, "temperature_c", path);
    try {
        p.corner = parse_corner(field<std::string>(j, "corner", path));
    } catch (const ParameterError& e) {
        throw ConfigError(path + ".corner: " + e.what());
    }
    return p;
}

TimingConfig read_timing(const json& j, const std::string& path) {
    TimingConfig t;
    t.conv_cycles = field<int>(j, "conv_cycles", path);
    t.wl_enable_cycles = field<int>(j, "wl_enable_cycles", path);
    t.sae1_cycle = field<int>(j, "sae1_cycle", path);
    t.sae2_cycle = field<int>(j, "sae2_cycle", path);
    t.dtc_cycle = field<int>(j, "dtc_cycle", path);
    t.extend_cycles_per_retry = field<int>(j, "extend_cycles_per_retry", path);
    return t;
}

SchemeModel read_scheme(const std::string& name, const json& j) {
    const std::string path = "schemes." + name;
    SchemeModel s;
    try {
        s.kind = parse_scheme(name);
    } catch (const ParameterError& e) {
        throw ConfigError(path + ": " + e.what());
    }
    s.area_factor = field<double>(j, "area_factor", path);
    s.energy_per_read_factor = field<double>(j, "energy_per_read_factor", path);
    s.capacity_factor = field<double>(j, "capacity_factor", path);
    s.correctable_bits_per_segment = field<int>(j, "correctable_bits_per_segment", path);
    s.segment_bits = field<int>(j, "segment_bits", path);
    s.check_bits = field<int>(j, "check_bits", path);
    s.operating_ber = field<double>(j, "operating_ber", path);
    const json& lat = j.contains("latency") ? j.at("latency") : json::object();
    const std::string lpath = path + ".latency";
    const auto model = field<std::string>(lat, "model", lpath);
    if (model == "fixed_margin") {
        s.latency = FixedMargin{field<double>(lat, "sigma_level", lpath), field<double>(lat, "overhead_ns", lpath)};
    } else if (model == "speculative") {
        s.latency = Speculative{field<double>(lat, "sigma_level", lpath), field<double>(lat, "ber", lpath),
                                field<double>(lat, "penalty_cycles", lpath), field<double>(lat, "overhead_ns", lpath)};
    } else {
        throw ConfigError("invalid value for config key '" + lpath + ".model'");
    }
    return s;
}

ExperimentConfig from_json(const json& j) {
    ExperimentConfig c;
    {
        const json& pts = array_field(j, "operating_points");
        for (std::size_t i = 0; i < pts.size(); ++i) {
            c.operating_points.push_back(read_point(pts[i], "operating_points[" + std::to_string(i) + "]"));
        }
    }
    {
        const json& rows = array_field(j, "calibration");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string path = "calibration[" + std::to_string(i) + "]";
            CalibrationRow r;
            r.point = read_point(rows[i], path);
            r.mean_ns = field<double>(rows[i], "mean_ns", path);
            r.stddev_ns = field<double>(rows[i], "stddev_ns", path);
            r.reference_swing_mv = field<double>(rows[i], "reference_swing_mv", path);
            c.calibration.push_back(r);
        }
    }
    c.offsets.sigma_os_mv = field<double>(j, "offset_sigma_mv", "");
    {
        const json& cs = j.at("charge_share");
        c.sense.caps.c_bl_ff = field<double>(cs, "c_bl_ff", "charge_share");
        c.sense.caps.c_blb_ff = field<double>(cs, "c_blb_ff", "charge_share");
        c.sense.caps.c_in_ff = field<double>(cs, "c_in_ff", "charge_share");
        c.sense.caps.c_inb_ff = field<double>(cs, "c_inb_ff", "charge_share");
        if (cs.contains("k_override") && !cs.at("k_override").is_null()) {
            c.sense.k_override = field<double>(cs, "k_override", "charge_share");
        }
    }
    {
        const json& clk = j.at("clock");
        try {
            c.clock.jitter = parse_jitter(field<std::string>(clk, "jitter", "clock"));
        } catch (const ParameterError& e) {
            throw ConfigError(std::string("clock.jitter: ") + e.what());
        }
        const json& periods = array_field(clk, "periods");
        for (std::size_t i = 0; i < periods.size(); ++i) {
            const std::string path = "clock.periods[" + std::to_string(i) + "]";
            c.clock.rows.push_back(ClockRow{field<double>(periods[i], "vdd", path),
                                            field<double>(periods[i], "avg_ns", path),
                                            field<double>(periods[i], "max_ns", path),
                                            field<double>(periods[i], "min_ns", path)});
        }
    }
    {
        const json& rows = array_field(j, "timing");
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const std::string path = "timing[" + std::to_string(i) + "]";
            c.timing.push_back(VddTiming{field<double>(rows[i], "vdd", path), read_timing(rows[i], path)});
        }
    }
    {
        const json& g = j.at("geometry");
        c.geometry.capacity = field<std::uint64_t>(g, "capacity", "geometry");
        c.geometry.ways = field<int>(g, "ways", "geometry");
        c.geometry.line_size = field<int>(g, "line_size", "geometry");
        c.geometry.data_arrays = field<int>(g, "data_arrays", "geometry");
        c.geometry.data_rows = field<int>(g, "data_rows", "geometry");
        c.geometry.data_cols = field<int>(g, "data_cols", "geometry");
        c.geometry.tag_arrays = field<int>(g, "tag_arrays", "geometry");
        c.geometry.tag_rows = field<int>(g, "tag_rows", "geometry");
        c.geometry.tag_cols = field<int>(g, "tag_cols", "geometry");
        c.geometry.tag_bits = field<int>(g, "tag_bits", "geometry");
        c.geometry.port_width = field<int>(g, "port_width", "geometry");
    }
    {
        const json& o = j.at("cache");
        c.cache.miss_penalty_cycles = field<int>(o, "miss_penalty_cycles", "cache");
        c.cache.overlap = field<bool>(o, "overlap", "cache");
        c.cache.tag_cross_sensing = field<bool>(o, "tag_cross_sensing", "cache");
        c.cache.tag_time_scale = field<double>(o, "tag_time_scale", "cache");
        c.cache.max_extend_cycles = field<int>(o, "max_extend_cycles", "cache");
    }
    {
        const json& s = j.at("schemes");
        if (!s.is_object()) throw ConfigError("config key 'schemes' must be an object");
        // Report in a fixed order regardless of key order in the file.
        for (const auto& def : default_schemes()) {
            if (s.contains(def.name())) c.schemes.push_back(read_scheme(def.name(), s.at(def.name())));
        }
        for (const auto& [name, _] : s.items()) {
            (void)_;
            read_scheme(name, s.at(name));  // rejects unknown scheme names
        }
    }
    c.scheme_calibration_vdd = field<double>(j, "scheme_calibration_vdd", "");
    c.discharge_latency_fraction = field<double>(j, "discharge_latency_fraction", "");
    c.discharge_energy_fraction = field<double>(j, "discharge_energy_fraction", "");
    c.sense_detect_overhead_cycles = field<double>(j, "sense_detect_overhead_cycles", "");
    {
        const json& b = j.at("ber_sweep");
        c.ber_sweep.rows = field<int>(b, "rows", "ber_sweep");
        c.ber_sweep.cols = field<int>(b, "cols", "ber_sweep");
        c.ber_sweep.extra_cycles = field<int>(b, "extra_cycles", "ber_sweep");
    }
    const auto trials = field<std::int64_t>(j, "trials", "");
    if (trials <= 0) throw ConfigError("config key 'trials' must be positive");
    c.trials = static_cast<std::uint64_t>(trials);
    c.master_seed = field<std::uint64_t>(j, "master_seed", "");
    c.output_dir = field<std::string>(j, "output_dir", "");
    c.threads = field<unsigned>(j, "threads", "");
    c.validate();
    return c;
}

bool same_point(const OperatingPoint& a, const OperatingPoint& b) {
    return std::abs(a.vdd - b.vdd) < 1e-9 && a.corner == b.corner && std::abs(a.temperature_c - b.temperature_c) < 1e-9;
}

} // namespace

void ExperimentConfig::validate() const {
    if (trials == 0) throw ConfigError("config key 'trials' must be positive");
    if (operating_points.empty()) throw ConfigError("config key 'operating_points' is empty");
    auto wrap = [](const std::string& key, auto&& fn) {
        try {
            fn();
        } catch (const ParameterError& e) {
            throw ConfigError(key + ": " + e.what());
        }
    };
    for (std::size_t i = 0; i < operating_points.size(); ++i) {
        const auto& p = operating_points[i];
        const std::string key = "operating_points[" + std::to_string(i) + "]";
        wrap(key, [&] { p.validate(); });
        calibration_for(p);
        try {
            clock.row(p.vdd);
        } catch (const LookupError&) {
            throw ConfigError("missing config key 'clock.periods' row for vdd " + std::to_string(p.vdd));
        }
        timing_for(p.vdd);
    }
    for (std::size_t i = 0; i < calibration.size(); ++i) {
        const auto& r = calibration[i];
        const std::string key = "calibration[" + std::to_string(i) + "]";
        wrap(key, [&] {
            r.point.validate();
            calibrate(r.mean_ns, r.stddev_ns, r.reference_swing_mv);
        });
    }
    for (std::size_t i = 0; i < timing.size(); ++i) {
        wrap("timing[" + std::to_string(i) + "]", [&] { timing[i].timing.validate(); });
    }
    wrap("offset_sigma_mv", [&] { offsets.validate(); });
    wrap("charge_share", [&] { sense.validate(); });
    wrap("clock", [&] { clock.validate(); });
    wrap("geometry", [&] { geometry.validate(); });
    if (cache.max_extend_cycles < 1) throw ConfigError("config key 'cache.max_extend_cycles' must be >= 1");
    if (!(cache.tag_time_scale > 0.0)) throw ConfigError("config key 'cache.tag_time_scale' must be positive");
    if (cache.miss_penalty_cycles < 0) throw ConfigError("config key 'cache.miss_penalty_cycles' must be >= 0");
    for (const auto& s : schemes) wrap("schemes." + s.name(), [&] { s.validate(); });
    if (!(discharge_latency_fraction > 0.0 && discharge_latency_fraction <= 1.0)) {
        throw ConfigError("config key 'discharge_latency_fraction' must lie in (0, 1]");
    }
    if (!(discharge_energy_fraction >= 0.0 && discharge_energy_fraction <= 1.0)) {
        throw ConfigError("config key 'discharge_energy_fraction' must lie in [0, 1]");
    }
    if (ber_sweep.rows <= 0 || ber_sweep.cols <= 0 || ber_sweep.cols % geometry.port_width != 0) {
        throw ConfigError("config key 'ber_sweep' needs positive rows and cols divisible by the port width");
    }
    if (ber_sweep.extra_cycles < 0) throw ConfigError("config key 'ber_sweep.extra_cycles' must be >= 0");
}

const CalibrationRow& ExperimentConfig::calibration_for(const OperatingPoint& point) const {
    for (const auto& r : calibration) {
        if (same_point(r.point, point)) return r;
    }
    throw ConfigError("missing config key 'calibration' row for vdd " + std::to_string(point.vdd) + " " +
                      std::string(to_string(point.corner)) + " " + std::to_string(point.temperature_c) + "C");
}

const CalibrationRow& ExperimentConfig::calibration_for_vdd(double vdd) const {
    for (const auto& p : operating_points) {
        if (std::abs(p.vdd - vdd) < 1e-9) return calibration_for(p);
    }
    for (const auto& r : calibration) {
        if (std::abs(r.point.vdd - vdd) < 1e-9) return r;
    }
    throw ConfigError("missing config key 'calibration' row for vdd " + std::to_string(vdd));
}

DischargeDistribution ExperimentConfig::distribution_for(const OperatingPoint& point) const {
    const auto& r = calibration_for(point);
    return calibrate(r.mean_ns, r.stddev_ns, r.reference_swing_mv);
}

const TimingConfig& ExperimentConfig::timing_for(double vdd) const {
    for (const auto& t : timing) {
        if (std::abs(t.vdd - vdd) < 1e-9) return t.timing;
    }
    throw ConfigError("missing config key 'timing' row for vdd " + std::to_string(vdd));
}

const OperatingPoint& ExperimentConfig::operating_point(double vdd) const {
    for (const auto& p : operating_points) {
        if (std::abs(p.vdd - vdd) < 1e-9) return p;
    }
    throw ConfigError("vdd " + std::to_string(vdd) + " is not among 'operating_points'");
}

const std::string& default_config_text() {
    static const std::string text(kDefaults);
    return text;
}

ExperimentConfig default_config() { return parse_config("{}"); }

ExperimentConfig parse_config(std::string_view json_text) {
    json patch;
    try {
        patch = json::parse(json_text.begin(), json_text.end());
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!patch.is_object()) throw ConfigError("config must be a JSON object");
    json merged = json::parse(kDefaults);
    for (const auto& [key, _] : patch.items()) {
        (void)_;
        if (!merged.contains(key)) throw ConfigError("unknown config key '" + key + "'");
    }
    merged.merge_patch(patch);
    return from_json(merged);
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace tscache
