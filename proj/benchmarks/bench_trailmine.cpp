#include <trailmine/analytic.hpp>
#include <trailmine/hiker.hpp>
#include <trailmine/rng.hpp>
#include <trailmine/simulator.hpp>

#include <benchmark/benchmark.h>

namespace {

void BM_TsmCycle(benchmark::State& state)
{
    const auto params = trailmine::validate_params(0.35, 0.5);
    const int a{static_cast<int>(state.range(0))};
    trailmine::RandomStream stream{1, 0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(trailmine::run_cycle_tsm(params, a, stream));
    }
}
BENCHMARK(BM_TsmCycle)->Arg(1)->Arg(2)->Arg(7);

void BM_AnalyticGrid(benchmark::State& state)
{
    for (auto _ : state) {
        double total{0.0};
        for (int i = 0; i < 101; ++i) {
            for (int j = 0; j < 101; ++j) {
                const auto params = trailmine::validate_params(0.001 + 0.00498 * i, 0.01 * j);
                for (int a = 1; a <= 7; ++a) total += trailmine::apparent_hashrate_tsm(params, a);
            }
        }
        benchmark::DoNotOptimize(total);
    }
    state.SetItemsProcessed(state.iterations() * 101 * 101 * 7);
}
BENCHMARK(BM_AnalyticGrid);

void BM_AbsorptionOracle(benchmark::State& state)
{
    const trailmine::HikerProblem problem{2, static_cast<int>(state.range(0)), 0.6};
    for (auto _ : state) {
        benchmark::DoNotOptimize(trailmine::absorption_oracle(problem));
    }
}
BENCHMARK(BM_AbsorptionOracle)->Arg(8)->Arg(64)->Arg(512);

void BM_EstimateMetrics(benchmark::State& state)
{
    const auto params = trailmine::validate_params(0.4, 0.5);
    const auto strategy = trailmine::StrategyId::trail_stubborn(2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(trailmine::estimate_metrics(strategy, params, 100000, 1, 1));
    }
    state.SetItemsProcessed(state.iterations() * 100000);
}
BENCHMARK(BM_EstimateMetrics)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
