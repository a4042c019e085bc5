#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tscache/cache.hpp"
#include "tscache/schemes.hpp"
#include "tscache/senseamp.hpp"
#include "tscache/timing.hpp"
#include "tscache/variation.hpp"

namespace tscache {

struct CalibrationRow {
    OperatingPoint point;
    double mean_ns = 1.0;
    double stddev_ns = 0.1;
    double reference_swing_mv = 150.0;
};

struct VddTiming {
    double vdd = 0.5;
    TimingConfig timing;
};

struct BerSweepSettings {
    int rows = 256;
    int cols = 128;
    int extra_cycles = 4;  // sweep 1..conv_cycles+extra_cycles CK
};

struct ExperimentConfig {
    std::vector<OperatingPoint> operating_points;
    std::vector<CalibrationRow> calibration;
    OffsetModel offsets;
    SenseModel sense;
    ClockModel clock;
    std::vector<VddTiming> timing;
    CacheGeometry geometry;
    CacheOptions cache;
    std::vector<SchemeModel> schemes;
    double scheme_calibration_vdd = 0.5;
    double discharge_latency_fraction = 0.854;
    double discharge_energy_fraction = 0.708;
    double sense_detect_overhead_cycles = 1.0;
    BerSweepSettings ber_sweep;
    std::uint64_t trials = 20;
    std::uint64_t master_seed = 1;
    std::string output_dir = "out";
    unsigned threads = 0;  // 0: hardware concurrency; never affects output bytes

    // ConfigError naming the offending key.
    void validate() const;

    const CalibrationRow& calibration_for(const OperatingPoint& point) const;
    const CalibrationRow& calibration_for_vdd(double vdd) const;
    DischargeDistribution distribution_for(const OperatingPoint& point) const;
    const TimingConfig& timing_for(double vdd) const;
    const OperatingPoint& operating_point(double vdd) const;
};

// Embedded defaults, as JSON text; also the full schema of accepted keys.
const std::string& default_config_text();

ExperimentConfig default_config();

// Parses `json_text` as a merge patch over the embedded defaults.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::string& path);


} // namespace tscache
