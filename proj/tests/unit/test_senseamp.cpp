#include <doctest.h>

#include <cmath>
#include <random>

#include "tscache/errors.hpp"
#include "tscache/senseamp.hpp"

using namespace tscache;

TEST_CASE("sense examples and tie rule") {
    CHECK(sense(100, 20) == 1);
    CHECK(sense(10, 20) == 0);
    CHECK(sense(0, 0) == 0);
    CHECK(sense(20, SenseAmp(20, 500)) == 0);
}

TEST_CASE("sense amp offset must stay below vdd") {
    CHECK_NOTHROW(SenseAmp(499, 500));
    CHECK_THROWS_AS((SenseAmp(500, 500)), ParameterError);
    CHECK_THROWS_AS((SenseAmp(-600, 500)), ParameterError);
}

TEST_CASE("offset model draws within the supply and with the configured spread") {
    CHECK_THROWS_AS((OffsetModel{0.0}.validate()), ParameterError);
    OffsetModel m{300.0};
    RngStream rng(11);
    double s2 = 0.0;
    for (int i = 0; i < 5000; ++i) {
        const double v = m.draw(rng, 500).v_os_mv();
        CHECK(std::abs(v) < 500.0);
        s2 += v * v;
    }
    OffsetModel narrow{50.0};
    RngStream r2(12);
    double n2 = 0.0;
    for (int i = 0; i < 20000; ++i) {
        const double v = narrow.draw(r2, 500).v_os_mv();
        n2 += v * v;
    }
    CHECK(std::sqrt(n2 / 20000) == doctest::Approx(50.0).epsilon(0.02));
}

TEST_CASE("charge_share examples") {
    const ChargeShareParams sym{50, 50, 0.5, 0.5};
    CHECK(charge_share(100, 0, sym) == doctest::Approx(-(49.5 / 50.5) * 100));
    CHECK(charge_share(100, 0, sym) == doctest::Approx(-98.0198).epsilon(1e-5));
    const ChargeShareParams tiny{50, 50, 1e-12, 1e-12};
    CHECK(charge_share(300, 120, tiny) == doctest::Approx(-180.0).epsilon(1e-9));
    CHECK(charge_share(250, 250, sym) == doctest::Approx(0.0));
}

TEST_CASE("shrink_factor examples and precondition") {
    CHECK(shrink_factor({50, 50, 0.5, 0.5}) == doctest::Approx(0.980198).epsilon(1e-6));
    CHECK(shrink_factor({30, 30, 0, 0}) == 1.0);
    CHECK(shrink_factor({50, 50, 50, 50}) == 0.0);
    CHECK_THROWS_AS((shrink_factor({50, 40, 0.5, 0.5})), PreconditionError);
    CHECK_THROWS_AS((shrink_factor({50, 50, 0.5, 0.6})), PreconditionError);
}

TEST_CASE("attenuation generalises shrink_factor and matches charge_share") {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> cap(1.0, 100.0), frac(0.001, 0.5), volt(0.0, 500.0);
    for (int i = 0; i < 2000; ++i) {
        const ChargeShareParams p{cap(g), cap(g), frac(g) * 10, frac(g) * 10};
        const double vbl = volt(g), vblb = volt(g);
        const double v2 = charge_share(vbl, vblb, p);
        CHECK(v2 == doctest::Approx(-attenuation(p) * (vbl - vblb)).epsilon(1e-9));
    }
    const ChargeShareParams sym{50, 50, 0.5, 0.5};
    CHECK(attenuation(sym) == doctest::Approx(shrink_factor(sym)).epsilon(1e-15));
}

TEST_CASE("cross_sense examples") {
    const double k = shrink_factor({50, 50, 0.5, 0.5});
    auto a = cross_sense(100, 20, k);
    CHECK(a.q1 == 1);
    CHECK(a.q2 == 0);
    CHECK_FALSE(a.error);
    auto b = cross_sense(10, 20, k);
    CHECK(b.q1 == 0);
    CHECK(b.q2 == 0);
    CHECK(b.error);
    auto c = cross_sense(100, -95, k);
    CHECK(c.q1 == 1);
    CHECK(c.q2 == 0);
    CHECK_FALSE(c.error);
    auto d = cross_sense(90, -95, k);
    CHECK(d.v_delta2_mv == doctest::Approx(-88.2178).epsilon(1e-5));
    CHECK(d.q1 == 1);
    CHECK(d.q2 == 1);
    CHECK(d.error);
}

TEST_CASE("cross_sense with capacitances agrees with the k form") {
    const ChargeShareParams p{50, 50, 0.5, 0.5};
    const double k = shrink_factor(p);
    for (int v1 = -400; v1 <= 400; v1 += 7) {
        for (int os = -200; os <= 200; os += 13) {
            const auto full = cross_sense(v1, SenseAmp(os, 500), p);
            const auto fast = cross_sense(v1, os, k);
            CHECK(full.q1 == fast.q1);
            CHECK(full.error == fast.error);
            CHECK(full.v_delta2_mv == doctest::Approx(fast.v_delta2_mv).epsilon(1e-12));
        }
    }
}

TEST_CASE("cross-sensing properties over a grid") {
    for (double k : {0.0, 0.3, 0.9802, 1.0}) {
        for (int v1 = -300; v1 <= 300; v1 += 3) {
            for (int os = -150; os <= 150; os += 3) {
                const auto ev = cross_sense(v1, os, k);
                CHECK(ev.error == (ev.q1 == ev.q2));
                CHECK(std::abs(ev.v_delta2_mv) <= std::abs(ev.v_delta1_mv));
                if (v1 != 0 && !ev.error) CHECK(ev.q1 == (v1 > 0 ? 1 : 0));
                if (std::abs(v1) < std::abs(os)) CHECK(ev.error);
            }
        }
    }
}

TEST_CASE("sense model picks k and validates") {
    SenseModel m;
    CHECK(m.k() == doctest::Approx(0.980198).epsilon(1e-6));
    m.k_override = 0.92;
    CHECK(m.k() == 0.92);
    m.k_override = 1.5;
    CHECK_THROWS_AS((m.validate()), ParameterError);
    SenseModel bad;
    bad.caps.c_in_ff = -1;
    CHECK_THROWS_AS((bad.validate()), ParameterError);
}
