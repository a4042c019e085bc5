#pragma once

#include <cstdint>
#include <string_view>

#include "tscache/rng.hpp"

namespace tscache {

enum class Corner { TT, SS, FF };

Corner parse_corner(std::string_view name);
std::string_view to_string(Corner corner) noexcept;

// (V_DD, temperature, process corner) label used to select calibration rows.
struct OperatingPoint {
    double vdd = 0.5;            // volts, [0.4, 1.0]
    double temperature_c = 25.0;
    Corner corner = Corner::TT;

    void validate() const;
    double vdd_mv() const noexcept { return vdd * 1000.0; }
};

// Lognormal distribution of the time a cell needs to develop `reference_swing_mv`
// of bitline differential.
struct DischargeDistribution {
    double mu = 0.0;     // log-nanoseconds
    double sigma = 1.0;  // log-scale
    double reference_swing_mv = 150.0;

    double mean() const noexcept;
    double stddev() const noexcept;
    // exp(mu + z * sigma): the one-sided z-sigma discharge time.
    double quantile_at_sigma(double z) const noexcept;
    // P(T > t).
    double exceedance(double t_ns) const noexcept;
};

// Closed-form moment inversion: sigma^2 = ln(1 + (sd/mean)^2), mu = ln(mean) - sigma^2/2.
DischargeDistribution calibrate(double mean_ns, double stddev_ns, double reference_swing_mv = 150.0);

struct CellSample {
    std::uint8_t stored_bit = 0;
    double t150_ns = 1.0;  // time to the reference swing
};

CellSample sample_cell(const DischargeDistribution& dist, std::uint8_t stored_bit, RngStream& rng);

// Signed bitline differential V_BL - V_BLB in mV at time t after wordline enable.
// stored_bit == 1 discharges BLB (positive result). Linear in t, saturating at vdd.
double bitline_delta(const CellSample& cell, double t_ns, double reference_swing_mv, double vdd_mv);

// Time for `cell` to develop a differential of magnitude `swing_mv`.
double time_to_swing(const CellSample& cell, double swing_mv, double reference_swing_mv);

} // namespace tscache
