#include <cmath>

#include <benchmark/benchmark.h>

#include "svmrates/rates.hpp"
#include "svmrates/svm.hpp"

namespace {

using namespace svmrates;

// Problems on the rate schedule for q = 1, α = 2.
SvmProblem scheduled(std::size_t n, bool offset) {
  const auto s = make_schedule(1, 2, 1);
  return {sample(SyntheticDistribution::power_margin(1.0), n, 3), s.lambda_of_n(n),
          GaussianKernel(s.sigma_of_n(n)), offset};
}

void BM_TrainCoordinate(benchmark::State& state) {
  const auto p = scheduled(static_cast<std::size_t>(state.range(0)), false);
  const auto K = gram(p.kernel, p.training_set.points());
  for (auto _ : state) benchmark::DoNotOptimize(train(p, K));
}
BENCHMARK(BM_TrainCoordinate)->RangeMultiplier(2)->Range(64, 2048)->Unit(benchmark::kMillisecond);

void BM_TrainOffset(benchmark::State& state) {
  const auto p = scheduled(static_cast<std::size_t>(state.range(0)), true);
  const auto K = gram(p.kernel, p.training_set.points());
  for (auto _ : state) benchmark::DoNotOptimize(train(p, K));
}
BENCHMARK(BM_TrainOffset)->RangeMultiplier(2)->Range(64, 1024)->Unit(benchmark::kMillisecond);

void BM_TrainProjectedGradient(benchmark::State& state) {
  const auto p = scheduled(static_cast<std::size_t>(state.range(0)), false);
  const auto K = gram(p.kernel, p.training_set.points());
  SolverOptions o;
  o.route = SolverRoute::projected_gradient;
  for (auto _ : state) benchmark::DoNotOptimize(train(p, K, o));
}
BENCHMARK(BM_TrainProjectedGradient)->RangeMultiplier(2)->Range(64, 512)->Unit(benchmark::kMillisecond);

}  // namespace
