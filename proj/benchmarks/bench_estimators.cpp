#include <benchmark/benchmark.h>

#include "lancaster/estimators.hpp"
#include "lancaster/samplers.hpp"

using namespace lancaster;

namespace {

Sample draw(benchmark::State& state) {
    return sample(parse_distribution("NM1"), static_cast<std::size_t>(state.range(0)), 1);
}

void BM_LancasterRank(benchmark::State& state) {
    const auto s = draw(state);
    for (auto _ : state) benchmark::DoNotOptimize(lancaster_rank(s));
    state.SetComplexityN(state.range(0));
}

void BM_LancasterLinear(benchmark::State& state) {
    const auto s = draw(state);
    for (auto _ : state) benchmark::DoNotOptimize(lancaster_linear(s));
    state.SetComplexityN(state.range(0));
}

void BM_DistanceCorrelation(benchmark::State& state) {
    const auto s = draw(state);
    for (auto _ : state) benchmark::DoNotOptimize(distance_correlation(s));
    state.SetComplexityN(state.range(0));
}

void BM_Xi(benchmark::State& state) {
    const auto s = draw(state);
    for (auto _ : state) benchmark::DoNotOptimize(xi_coefficient(s));
    state.SetComplexityN(state.range(0));
}

}  // namespace

BENCHMARK(BM_LancasterRank)->RangeMultiplier(10)->Range(100, 100000)->Complexity();
BENCHMARK(BM_LancasterLinear)->RangeMultiplier(10)->Range(100, 100000)->Complexity();
BENCHMARK(BM_DistanceCorrelation)->RangeMultiplier(4)->Range(64, 4096)->Complexity();
BENCHMARK(BM_Xi)->RangeMultiplier(10)->Range(100, 100000)->Complexity();

BENCHMARK_MAIN();
