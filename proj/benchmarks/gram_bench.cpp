#include <benchmark/benchmark.h>

#include "svmrates/kernel.hpp"

namespace {

void BM_Gram(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto pts = svmrates::sample(svmrates::SyntheticDistribution::power_margin(1.0), n, 1).points();
  const svmrates::GaussianKernel k(4.0);
  for (auto _ : state) benchmark::DoNotOptimize(svmrates::gram(k, pts));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Gram)->RangeMultiplier(2)->Range(64, 2048)->Complexity(benchmark::oNSquared);

}  // namespace
