#include "tscache/senseamp.hpp"

#include <cmath>
#include <random>
#include <string>

#include "tscache/errors.hpp"

namespace tscache {

SenseAmp::SenseAmp(double v_os_mv, double vdd_mv) : v_os_(v_os_mv) {
    if (!(std::abs(v_os_mv) < vdd_mv)) {
        throw ParameterError("sense amp offset " + std::to_string(v_os_mv) +
                             " mV not below vdd " + std::to_string(vdd_mv) + " mV");
    }
}

void OffsetModel::validate() const {
    if (!(sigma_os_mv > 0.0)) throw ParameterError("offset sigma must be positive");
}

SenseAmp OffsetModel::draw(RngStream& rng, double vdd_mv) const {
    std::normal_distribution<double> offset(0.0, sigma_os_mv);
    for (;;) {
        const double v = offset(rng.engine());
        if (std::abs(v) < vdd_mv) return SenseAmp(v, vdd_mv);
    }
}

void ChargeShareParams::validate() const {
    if (!(c_bl_ff > 0.0 && c_blb_ff > 0.0 && c_in_ff > 0.0 && c_inb_ff > 0.0)) {
        throw ParameterError("charge-share capacitances must be positive");
    }
}

double charge_share(double v_bl_mv, double v_blb_mv, const ChargeShareParams& p) {
    // Each input is a weighted average whose weights sum to one, so V_BLB can be
    // subtracted from every voltage first; this avoids cancellation when V_BL ~ V_BLB.
    const double d = v_bl_mv - v_blb_mv;
    const double v_in = (p.c_in_ff * d) / (p.c_blb_ff + p.c_in_ff);
    const double v_inb = (p.c_bl_ff * d) / (p.c_bl_ff + p.c_inb_ff);
    return v_in - v_inb;
}

double shrink_factor(const ChargeShareParams& p) {
    if (!p.symmetric()) {
        throw PreconditionError("shrink_factor requires C_BL == C_BLB and C_IN == C_INB");
    }
    return (p.c_bl_ff - p.c_in_ff) / (p.c_bl_ff + p.c_in_ff);
}

double attenuation(const ChargeShareParams& p) {
    return 1.0 - p.c_in_ff / (p.c_blb_ff + p.c_in_ff) - p.c_inb_ff / (p.c_bl_ff + p.c_inb_ff);
}

SenseEvent cross_sense(double v_delta1_mv, const SenseAmp& sa, const ChargeShareParams& p) {
    SenseEvent ev;
    ev.v_delta1_mv = v_delta1_mv;
    // Only the differential matters; reference BLB to 0 mV.
    ev.v_delta2_mv = charge_share(v_delta1_mv, 0.0, p);
    ev.q1 = sense(ev.v_delta1_mv, sa);
    ev.q2 = sense(ev.v_delta2_mv, sa);
    ev.error = ev.q1 == ev.q2;
    return ev;
}

void SenseModel::validate() const {
    if (k_override) {
        if (!(*k_override >= 0.0 && *k_override <= 1.0)) {
            throw ParameterError("k override must lie in [0, 1]");
        }
    } else {
        caps.validate();
        const double k = attenuation(caps);
        if (!(k >= 0.0 && k <= 1.0)) {
            throw ParameterError("charge-share capacitances give attenuation outside [0, 1]");
        }
    }
}

double SenseModel::k() const {
    return k_override ? *k_override : attenuation(caps);
}

} // namespace tscache
