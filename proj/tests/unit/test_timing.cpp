#include <doctest.h>

#include "tscache/errors.hpp"
#include "tscache/timing.hpp"

using namespace tscache;

TEST_CASE("ck_period returns the measured averages") {
    auto m = default_clock_model();
    CHECK(ck_period(m, 0.5) == 0.687);
    CHECK(ck_period(m, 0.6) == 0.265);
    CHECK_THROWS_AS((ck_period(m, 0.55)), LookupError);
}

TEST_CASE("jittered clocks stay in range and are deterministic per chip") {
    for (auto j : {ClockJitter::uniform_min_max, ClockJitter::per_chip_draw}) {
        auto m = default_clock_model();
        m.jitter = j;
        double sum = 0.0;
        const int n = 20000;
        for (std::uint64_t s = 0; s < n; ++s) {
            const double ck = ck_period(m, 0.5, s);
            CHECK(ck >= 0.658);
            CHECK(ck <= 0.744);
            CHECK(ck == ck_period(m, 0.5, s));
            sum += ck;
        }
        if (j == ClockJitter::per_chip_draw) CHECK(sum / n == doctest::Approx(0.687).epsilon(0.003));
    }
    CHECK(parse_jitter("per_chip_draw") == ClockJitter::per_chip_draw);
    CHECK(to_string(ClockJitter::uniform_min_max) == "uniform_min_max");
    CHECK_THROWS_AS((parse_jitter("gaussian")), ParameterError);
}

TEST_CASE("clock rows must be ordered") {
    ClockModel m;
    m.rows = {{0.5, 0.7, 0.6, 0.65}};
    CHECK_THROWS_AS((m.validate()), ParameterError);
    CHECK_NOTHROW(default_clock_model().validate());
}

TEST_CASE("timing_instants examples") {
    const TimingConfig c28{28, 28, 15, 16, 17, 17};
    CHECK(timing_instants(c28, 0.687).t_wl_end_ns == doctest::Approx(19.236).epsilon(1e-14));
    const TimingConfig c20{20, 20, 9, 10, 11, 11};
    CHECK(timing_instants(c20, 0.265).t_wl_end_ns == doctest::Approx(5.30).epsilon(1e-14));
    const TimingConfig c4{10, 10, 4, 5, 6, 1};
    CHECK(timing_instants(c4, 1.0).t_sae1_ns == 4.0);
}

TEST_CASE("instants are integer multiples of ck and ordered") {
    const TimingConfig cfg;
    for (double ck : {0.099, 0.265, 0.687, 1.3}) {
        const auto t = timing_instants(cfg, ck);
        CHECK(t.t_sae1_ns == cfg.sae1_cycle * ck);
        CHECK(t.t_sae2_ns == cfg.sae2_cycle * ck);
        CHECK(t.t_dtc_ns == cfg.dtc_cycle * ck);
        CHECK(t.t_wl_end_ns == cfg.wl_enable_cycles * ck);
        CHECK(t.t_conv_wl_ns == cfg.conv_cycles * ck);
        CHECK(t.t_sae1_ns < t.t_sae2_ns);
        CHECK(t.t_sae2_ns <= t.t_dtc_ns);
        CHECK(t.t_dtc_ns <= t.t_wl_end_ns);
    }
    CHECK_THROWS_AS((timing_instants(cfg, 0.0)), ParameterError);
}

TEST_CASE("timing config invariants") {
    CHECK_THROWS_AS((TimingConfig{28, 17, 18, 19, 19, 17}.validate()), ParameterError);
    CHECK_THROWS_AS((TimingConfig{28, 17, 15, 15, 17, 17}.validate()), ParameterError);
    CHECK_THROWS_AS((TimingConfig{28, 17, 15, 16, 15, 17}.validate()), ParameterError);
    CHECK_THROWS_AS((TimingConfig{28, 17, 15, 16, 17, 0}.validate()), ParameterError);
}

TEST_CASE("speculative delays for the comparison arrays") {
    const double ck = 1.0;
    const auto d512 = speculative_delays(comparison_array_timing(512), ck, ck);
    CHECK(d512.conv_over_error() == doctest::Approx(1.78).epsilon(0.02 / 1.78));
    const auto d128 = speculative_delays(comparison_array_timing(128), ck, ck);
    CHECK(d128.conv_over_error() == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(d128.t_array_ns < d128.t_error_ns);
    CHECK_THROWS_AS((comparison_array_timing(256)), LookupError);
}

TEST_CASE("ratio is exactly 2 when the error delay is half the conventional one") {
    const TimingConfig c{20, 10, 8, 9, 10, 10};
    CHECK(speculative_delays(c, 0.5, 0.0).conv_over_error() == 2.0);
}
