#include <benchmark/benchmark.h>

#include "gridmc/engine.hpp"
#include "gridmc/plan.hpp"
#include "gridmc/queens.hpp"
#include "gridmc/scenario.hpp"

namespace {

void bm_build_plan(benchmark::State& state) {
    const int rows = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(gridmc::build_plan(rows, 6));
    }
}
BENCHMARK(bm_build_plan)->Arg(6)->Arg(18)->Arg(60);

void bm_verify_plan(benchmark::State& state) {
    const gridmc::ChannelPlan plan =
        gridmc::build_plan(static_cast<int>(state.range(0)), 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gridmc::verify_plan(plan));
    }
}
BENCHMARK(bm_verify_plan)->Arg(18)->Arg(60);

void bm_queens_count(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            gridmc::count_n_queens_solutions(static_cast<int>(state.range(0))));
    }
}
BENCHMARK(bm_queens_count)->Arg(6)->Arg(8);

void bm_engine(benchmark::State& state, gridmc::Scheme scheme) {
    gridmc::ScenarioConfig cfg;
    cfg.duration_s = 2.0;
    cfg.knobs.warmup_s = 0.5;
    const int n = static_cast<int>(state.range(0));
    const double tz = scheme == gridmc::Scheme::grid ? 10.0 : 0.0;
    const gridmc::World w = gridmc::make_world(cfg, scheme, n, tz, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(gridmc::run(w, cfg.duration_s, 1));
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK_CAPTURE(bm_engine, grid, gridmc::Scheme::grid)->Arg(20)->Arg(60);
BENCHMARK_CAPTURE(bm_engine, baseline, gridmc::Scheme::dcf_baseline)
    ->Arg(20)
    ->Arg(60);

} // namespace

BENCHMARK_MAIN();
