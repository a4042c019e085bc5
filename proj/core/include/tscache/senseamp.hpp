#pragma once

#include <cstdint>
#include <optional>

#include "tscache/rng.hpp"

namespace tscache {

// Latch-type sense amplifier reduced to its input-referred offset.
// Positive v_os means small positive inputs resolve to 0.
class SenseAmp {
public:
    SenseAmp() = default;
    // Throws ParameterError unless |v_os| < vdd.
    SenseAmp(double v_os_mv, double vdd_mv);

    double v_os_mv() const noexcept { return v_os_; }

private:
    double v_os_ = 0.0;
};

// Static per-column mismatch: v_os ~ N(0, sigma_os), drawn once per column.
struct OffsetModel {
    double sigma_os_mv = 50.0;

    void validate() const;
    // Draws are rejected and redrawn while |v_os| >= vdd.
    SenseAmp draw(RngStream& rng, double vdd_mv) const;
};

// Bitline and SA-input capacitances seen when the SA inputs are swapped.
struct ChargeShareParams {
    double c_bl_ff = 50.0;
    double c_blb_ff = 50.0;
    double c_in_ff = 0.5;
    double c_inb_ff = 0.5;

    void validate() const;
    bool symmetric() const noexcept { return c_bl_ff == c_blb_ff && c_in_ff == c_inb_ff; }
};

struct SenseEvent {
    double v_delta1_mv = 0.0;
    double v_delta2_mv = 0.0;
    std::uint8_t q1 = 0;
    std::uint8_t q2 = 0;
    bool error = false;
};

// 1 iff v_delta > v_os; an exact tie resolves to 0.
inline std::uint8_t sense(double v_delta_mv, double v_os_mv) noexcept {
    return v_delta_mv > v_os_mv ? 1 : 0;
}
inline std::uint8_t sense(double v_delta_mv, const SenseAmp& sa) noexcept {
    return sense(v_delta_mv, sa.v_os_mv());
}

// Differential seen at the second evaluation after the SA inputs are swapped:
//   (C_BLB*V_BLB + C_IN*V_BL)/(C_BLB + C_IN) - (C_BL*V_BL + C_INB*V_BLB)/(C_BL + C_INB)
double charge_share(double v_bl_mv, double v_blb_mv, const ChargeShareParams& p);

// k = (C_BL - C_IN)/(C_BL + C_IN); only defined for symmetric capacitances.
double shrink_factor(const ChargeShareParams& p);

// Attenuation for arbitrary capacitances. charge_share() is translation invariant,
// so V_d2 = -k * V_d1 with k = 1 - C_IN/(C_BLB+C_IN) - C_INB/(C_BL+C_INB).
double attenuation(const ChargeShareParams& p);

// Cross-sensing with a precomputed attenuation k: sense, swap, sense again.
inline SenseEvent cross_sense(double v_delta1_mv, double v_os_mv, double k) noexcept {
    SenseEvent ev;
    ev.v_delta1_mv = v_delta1_mv;
    ev.v_delta2_mv = -k * v_delta1_mv;
    ev.q1 = sense(ev.v_delta1_mv, v_os_mv);
    ev.q2 = sense(ev.v_delta2_mv, v_os_mv);
    ev.error = ev.q1 == ev.q2;
    return ev;
}

// Full form: the second differential comes from charge_share() on the swapped inputs.
SenseEvent cross_sense(double v_delta1_mv, const SenseAmp& sa, const ChargeShareParams& p);

// Charge-share parameters plus an optional direct override of k, used to emulate
// second-order attenuation beyond the capacitive divider.
struct SenseModel {
    ChargeShareParams caps;
    std::optional<double> k_override;

    void validate() const;
    double k() const;
};

} // namespace tscache
