#include <benchmark/benchmark.h>

#include "lancaster/inference.hpp"
#include "lancaster/samplers.hpp"

using namespace lancaster;

namespace {

void BM_BootstrapCov(benchmark::State& state) {
    const auto estimator = state.range(0) == 0 ? Estimator::Rank : Estimator::Linear;
    const auto s = sample(DistributionSpec::bvn(0.5), 200, 6);
    for (auto _ : state) benchmark::DoNotOptimize(bootstrap_cov(s, estimator, 300, 7));
    state.SetLabel(estimator == Estimator::Rank ? "rank" : "linear");
}

void BM_PlugInInterval(benchmark::State& state) {
    const auto s = sample(DistributionSpec::bvn(0.5), 200, 8);
    for (auto _ : state) {
        benchmark::DoNotOptimize(confidence_interval(s, CiMethod::PlugInConservative, 0.95, 0, 1));
    }
}

}  // namespace

BENCHMARK(BM_BootstrapCov)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PlugInInterval);

BENCHMARK_MAIN();
