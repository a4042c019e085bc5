#include <doctest.h>

#include <cmath>
#include <vector>

#include "../support/oracles.hpp"
#include "tscache/errors.hpp"
#include "tscache/rng.hpp"
#include "tscache/variation.hpp"

using namespace tscache;

TEST_CASE("calibrate recovers the discharge statistics at 0.5V") {
    const auto d = calibrate(7.4, 2.36, 150.0);
    CHECK(d.mu == doctest::Approx(1.9531).epsilon(1e-4));
    CHECK(d.sigma == doctest::Approx(0.3112).epsilon(1e-3));
    CHECK(d.reference_swing_mv == 150.0);
    // quadrature moments of the returned lognormal
    const double m1 = oracle::lognormal_moment(d.mu, d.sigma, 1);
    const double m2 = oracle::lognormal_moment(d.mu, d.sigma, 2);
    CHECK(m1 == doctest::Approx(7.4).epsilon(1e-9));
    CHECK(std::sqrt(m2 - m1 * m1) == doctest::Approx(2.36).epsilon(1e-7));
}

TEST_CASE("calibrate vanishing-variance limit") {
    const auto d = calibrate(1.0, 1e-12, 150.0);
    CHECK(d.sigma == doctest::Approx(1e-12).epsilon(1e-6));
    CHECK(std::abs(d.mu) < 1e-20);
}

TEST_CASE("calibrate nominal-voltage row") {
    const auto d = calibrate(0.135, 0.01, 150.0);
    CHECK(d.mu == doctest::Approx(std::log(0.135) - d.sigma * d.sigma / 2).epsilon(1e-14));
    CHECK(d.mean() == doctest::Approx(0.135).epsilon(1e-12));
}

TEST_CASE("calibrate rejects non-positive inputs") {
    CHECK_THROWS_AS((calibrate(0.0, 1.0)), ParameterError);
    CHECK_THROWS_AS((calibrate(-1.0, 1.0)), ParameterError);
    CHECK_THROWS_AS((calibrate(1.0, 0.0)), ParameterError);
    CHECK_THROWS_AS((calibrate(1.0, -0.5)), ParameterError);
    CHECK_THROWS_AS((calibrate(1.0, 0.5, 0.0)), ParameterError);
}

TEST_CASE("moment round trip holds across a parameter grid") {
    for (double mean : {0.05, 0.135, 1.0, 7.4, 120.0}) {
        for (double cv : {1e-6, 0.01, 0.1, 0.32, 1.0, 3.0}) {
            const auto d = calibrate(mean, mean * cv);
            CHECK(std::abs(d.mean() / mean - 1.0) < 1e-9);
            CHECK(std::abs(d.stddev() / (mean * cv) - 1.0) < 1e-9);
        }
    }
}

TEST_CASE("quantiles match the bisection oracle") {
    const auto d = calibrate(7.4, 2.36);
    for (double z : {-2.0, 0.0, 1.0, 3.0, 6.0}) {
        CHECK(d.quantile_at_sigma(z) == doctest::Approx(oracle::lognormal_quantile(d.mu, d.sigma, z)).epsilon(1e-9));
    }
    CHECK(d.quantile_at_sigma(6) == doctest::Approx(45.6).epsilon(0.002));
    CHECK(d.quantile_at_sigma(3) == doctest::Approx(17.9).epsilon(0.002));
    CHECK(d.quantile_at_sigma(3) / d.quantile_at_sigma(6) == doctest::Approx(0.39).epsilon(0.01));
    CHECK(d.exceedance(d.quantile_at_sigma(3)) == doctest::Approx(oracle::norm_sf(3.0)).epsilon(1e-9));
}

TEST_CASE("sample_cell is positive, deterministic and matches the distribution") {
    const auto d = calibrate(7.4, 2.36);
    RngStream a(42), b(42);
    for (int i = 0; i < 100; ++i) {
        const auto x = sample_cell(d, 1, a);
        const auto y = sample_cell(d, 1, b);
        CHECK(x.t150_ns > 0.0);
        CHECK(x.stored_bit == 1);
        CHECK(x.t150_ns == y.t150_ns);
    }
    RngStream r(7);
    double sum = 0.0, mx = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double t = sample_cell(d, 0, r).t150_ns;
        sum += t;
        mx = std::max(mx, t);
    }
    CHECK(sum / 10000 >= 7.25);
    CHECK(sum / 10000 <= 7.55);
    CHECK(mx < 60.0);
}

TEST_CASE("bitline_delta examples") {
    CHECK(bitline_delta({1, 10.0}, 10.0, 150, 500) == doctest::Approx(150.0));
    CHECK(bitline_delta({0, 10.0}, 5.0, 150, 500) == doctest::Approx(-75.0));
    CHECK(bitline_delta({1, 1.0}, 100.0, 150, 500) == doctest::Approx(500.0));
    CHECK_THROWS_AS((bitline_delta({1, 1.0}, -0.1, 150, 500)), ParameterError);
}

TEST_CASE("bitline_delta is monotone in t with the stored-bit sign") {
    RngStream r(3);
    const auto d = calibrate(7.4, 2.36);
    for (int i = 0; i < 200; ++i) {
        const auto bit = static_cast<std::uint8_t>(i % 2);
        const auto cell = sample_cell(d, bit, r);
        double prev = 0.0;
        for (double t = 0.01; t < 80.0; t *= 1.3) {
            const double v = bitline_delta(cell, t, 150, 500);
            CHECK((v > 0) == (bit == 1));
            CHECK(std::abs(v) >= prev);
            CHECK(std::abs(v) <= 500.0);
            prev = std::abs(v);
        }
    }
}

TEST_CASE("time_to_swing scales linearly with the swing") {
    const CellSample c{1, 8.0};
    CHECK(time_to_swing(c, 150, 150) == doctest::Approx(8.0));
    CHECK(time_to_swing(c, 75, 150) == doctest::Approx(4.0));
    CHECK(bitline_delta(c, time_to_swing(c, 42, 150), 150, 500) == doctest::Approx(42.0));
}

TEST_CASE("operating point validation and corner parsing") {
    CHECK_NOTHROW(OperatingPoint{0.5, 0.0, Corner::SS}.validate());
    CHECK_THROWS_AS((OperatingPoint{0.3, 25.0, Corner::TT}.validate()), ParameterError);
    CHECK_THROWS_AS((OperatingPoint{1.1, 25.0, Corner::TT}.validate()), ParameterError);
    CHECK(parse_corner("SS") == Corner::SS);
    CHECK(parse_corner("FF") == Corner::FF);
    CHECK(to_string(Corner::TT) == "TT");
    CHECK_THROWS_AS((parse_corner("XX")), ParameterError);
}

TEST_CASE("derived seeds are distinct and stable") {
    CHECK(derive_seed(1, 0) == derive_seed(1, 0));
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    RngStream a(5, 9), b(derive_seed(5, 9));
    CHECK(a.engine()() == b.engine()());
}
