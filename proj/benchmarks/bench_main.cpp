#include <benchmark/benchmark.h>

#include "tscache/array.hpp"
#include "tscache/cache.hpp"
#include "tscache/senseamp.hpp"
#include "tscache/trace.hpp"
#include "tscache/variation.hpp"

using namespace tscache;

namespace {

const DischargeDistribution kDist = calibrate(7.4, 2.36);

SenseSchedule default_schedule() { return make_schedule(TimingConfig{}, 0.687, 0.980198); }

void BM_CrossSense(benchmark::State& state) {
    double v = -250.0;
    for (auto _ : state) {
        v = v > 250.0 ? -250.0 : v + 0.37;
        benchmark::DoNotOptimize(cross_sense(v, 12.5, 0.980198));
    }
}
BENCHMARK(BM_CrossSense);

void BM_BuildArray(benchmark::State& state) {
    const ArrayConfig cfg{256, 128, 64, 4, 500};
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_array(cfg, kDist, OffsetModel{50.0}, BitPattern::from_bytes({0x55}), ++seed));
    }
    state.SetItemsProcessed(state.iterations() * cfg.rows * cfg.cols);
}
BENCHMARK(BM_BuildArray)->Unit(benchmark::kMillisecond);

void BM_ReadRow(benchmark::State& state) {
    const ArrayConfig cfg{256, 128, 64, 4, 500};
    const auto a = build_array(cfg, kDist, OffsetModel{50.0}, BitPattern::from_bytes({0x55}), 1);
    const auto sched = default_schedule();
    int row = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(read_row(a, row, sched));
        row = (row + 1) % cfg.rows;
    }
}
BENCHMARK(BM_ReadRow);

void BM_MeasureErrorCurve(benchmark::State& state) {
    const ArrayConfig cfg{256, 128, 64, 4, 500};
    const double times[] = {6.87, 10.305, 17.93};
    MeasureOptions opt;
    opt.threads = static_cast<unsigned>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(measure_error_curve(kDist, OffsetModel{50.0}, cfg, times, 8, 3, opt));
    }
}
BENCHMARK(BM_MeasureErrorCurve)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_CacheAccess(benchmark::State& state) {
    CacheBuildParams p;
    p.dist = kDist;
    p.k = 0.980198;
    p.ck_ns = 0.687;
    auto cache = build_cache(p, 9);
    const auto trace = traverse_55aa(p.geometry.capacity);
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cache.access(trace[i]));
        i = (i + 1) % trace.size();
    }
}
BENCHMARK(BM_CacheAccess);

void BM_BuildCache(benchmark::State& state) {
    CacheBuildParams p;
    p.dist = kDist;
    p.k = 0.980198;
    p.ck_ns = 0.687;
    std::uint64_t seed = 0;
    for (auto _ : state) benchmark::DoNotOptimize(build_cache(p, ++seed));
}
BENCHMARK(BM_BuildCache)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
