#include "tscache/variation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "tscache/errors.hpp"

namespace tscache {

Corner parse_corner(std::string_view name) {
    if (name == "TT") return Corner::TT;
    if (name == "SS") return Corner::SS;
    if (name == "FF") return Corner::FF;
    throw ParameterError("unknown process corner '" + std::string(name) + "'");
}

std::string_view to_string(Corner corner) noexcept {
    switch (corner) {
    case Corner::TT: return "TT";
    case Corner::SS: return "SS";
    case Corner::FF: return "FF";
    }
    return "TT";
}

void OperatingPoint::validate() const {
    if (!(vdd >= 0.4 && vdd <= 1.0)) {
        throw ParameterError("vdd " + std::to_string(vdd) + " V outside [0.4, 1.0]");
    }
}

double DischargeDistribution::mean() const noexcept {
    return std::exp(mu + 0.5 * sigma * sigma);
}

double DischargeDistribution::stddev() const noexcept {
    return mean() * std::sqrt(std::expm1(sigma * sigma));
}

double DischargeDistribution::quantile_at_sigma(double z) const noexcept {
    return std::exp(mu + z * sigma);
}

double DischargeDistribution::exceedance(double t_ns) const noexcept {
    if (t_ns <= 0.0) return 1.0;
    const double z = (std::log(t_ns) - mu) / sigma;
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

DischargeDistribution calibrate(double mean_ns, double stddev_ns, double reference_swing_mv) {
    if (!(mean_ns > 0.0) || !(stddev_ns > 0.0)) {
        throw ParameterError("calibrate: mean and stddev must be positive");
    }
    if (!(reference_swing_mv > 0.0)) {
        throw ParameterError("calibrate: reference swing must be positive");
    }
    const double cv = stddev_ns / mean_ns;
    // log1p keeps sigma ~ cv accurate in the vanishing-variance limit.
    const double sigma2 = std::log1p(cv * cv);
    DischargeDistribution d;
    d.sigma = std::sqrt(sigma2);
    d.mu = std::log(mean_ns) - 0.5 * sigma2;
    d.reference_swing_mv = reference_swing_mv;
    return d;
}

CellSample sample_cell(const DischargeDistribution& dist, std::uint8_t stored_bit, RngStream& rng) {
    std::lognormal_distribution<double> t150(dist.mu, dist.sigma);
    return CellSample{static_cast<std::uint8_t>(stored_bit ? 1 : 0), t150(rng.engine())};
}

double bitline_delta(const CellSample& cell, double t_ns, double reference_swing_mv, double vdd_mv) {
    if (t_ns < 0.0 || std::isnan(t_ns)) {
        throw ParameterError("bitline_delta: negative discharge time");
    }
    const double magnitude = std::min(reference_swing_mv * t_ns / cell.t150_ns, vdd_mv);
    return cell.stored_bit ? magnitude : -magnitude;
}

double time_to_swing(const CellSample& cell, double swing_mv, double reference_swing_mv) {
    return cell.t150_ns * std::abs(swing_mv) / reference_swing_mv;
}

} // namespace tscache
