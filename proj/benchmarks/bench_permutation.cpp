#include <numeric>
#include <vector>

#include <benchmark/benchmark.h>

#include "lancaster/inference.hpp"
#include "lancaster/rng.hpp"
#include "lancaster/samplers.hpp"

using namespace lancaster;

namespace {

// One re-pairing evaluation of a prepared statistic.
void BM_PreparedStatistic(benchmark::State& state) {
    const auto c = static_cast<Coefficient>(state.range(0));
    const auto s = sample(DistributionSpec::bvn(0.0), 100, 2);
    const auto stat = PermutationStatistic::prepare(c, s);
    std::vector<std::size_t> perm(s.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rng rng(3);
    for (auto _ : state) {
        rng.shuffle(std::span<std::size_t>(perm));
        benchmark::DoNotOptimize((*stat)(perm));
    }
    state.SetLabel(std::string(coefficient_id(c)));
}

void BM_PermutationTest(benchmark::State& state) {
    const auto s = sample(DistributionSpec::bvn(0.0), 100, 4);
    for (auto _ : state) {
        benchmark::DoNotOptimize(test_permutation(s, Coefficient::LancasterRank, 500, 5));
    }
}

}  // namespace

BENCHMARK(BM_PreparedStatistic)->DenseRange(0, 5);
BENCHMARK(BM_PermutationTest);

BENCHMARK_MAIN();
