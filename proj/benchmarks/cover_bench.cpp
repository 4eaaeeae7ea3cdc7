#include <benchmark/benchmark.h>

#include "svmrates/complexity.hpp"

namespace {

using namespace svmrates;

void BM_CoverProfile(benchmark::State& state) {
  const auto pts = sample(SyntheticDistribution::power_margin(1.0), static_cast<std::size_t>(state.range(0)), 5).points();
  for (auto _ : state) benchmark::DoNotOptimize(cover_profile(pts, 8.0));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CoverProfile)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond)->Complexity(benchmark::oNCubed);

void BM_LogCoverBounds(benchmark::State& state) {
  const auto prof = cover_profile(sample(SyntheticDistribution::power_margin(1.0), 500, 5).points(), 8.0);
  for (auto _ : state) benchmark::DoNotOptimize(log_cover_bounds(prof, 0.01));
}
BENCHMARK(BM_LogCoverBounds);

}  // namespace
