#include <cmath>
#include <numbers>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "svmrates/format.hpp"
#include "svmrates/numeric.hpp"
#include "svmrates/stats.hpp"

namespace svmrates {
namespace {

TEST(Simpson, PolynomialAndTranscendental) {
  const auto cubic = quad::adaptive_simpson([](double x) { return x * x * x - x; }, 0.0, 2.0);
  EXPECT_NEAR(cubic.value, 2.0, 1e-12);
  const auto s = quad::adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  EXPECT_NEAR(s.value, 2.0, 1e-8);
  EXPECT_TRUE(s.converged);
}

TEST(Simpson, JumpAtBreakpoint) {
  const std::vector<double> cuts{0.3};
  const auto r = quad::adaptive_simpson([](double x) { return x < 0.3 ? 1.0 : 5.0; }, 0.0, 1.0, cuts);
  EXPECT_NEAR(r.value, 0.3 + 5.0 * 0.7, 1e-10);
}

TEST(Simpson, NarrowPeakIsFound) {
  // exp(-(x-0.4)²/w²) integrates to w√π when the peak is far from the ends.
  const double w = 1e-3;
  const auto r = quad::adaptive_simpson(
      [w](double x) { return std::exp(-(x - 0.4) * (x - 0.4) / (w * w)); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, w * std::sqrt(std::numbers::pi), 1e-9);
}

TEST(GaussLegendre, ExactForHighDegree) {
  const quad::GaussLegendreRule rule(8);
  double wsum = 0.0;
  for (double w : rule.weights()) wsum += w;
  EXPECT_NEAR(wsum, 2.0, 1e-14);
  // Degree 15 is integrated exactly by 8 nodes.
  const double v = rule.integrate([](double x) { return std::pow(x, 14) + x; }, -1.0, 1.0, 1);
  EXPECT_NEAR(v, 2.0 / 15.0, 1e-14);
  EXPECT_NEAR(rule.integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 4), std::exp(1.0) - 1.0,
              1e-14);
}

TEST(MonteCarlo, SquareIntegral) {
  const auto r = quad::stratified_monte_carlo(
      [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1]; }, 2, 32, 2, 7);
  // ∫∫ x² + y² over [-1,1]² is 8/3.
  EXPECT_NEAR(r.value, 8.0 / 3.0, 5.0 * r.error + 1e-4);
  EXPECT_TRUE(r.monte_carlo);
}

TEST(LevelCrossings, FindsRoots) {
  const std::vector<double> levels{0.0};
  const auto roots = quad::level_crossings([](double x) { return std::cos(3.0 * x); }, 0.0, 3.0, levels);
  ASSERT_EQ(roots.size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_NEAR(roots[k], (2.0 * k + 1.0) * std::numbers::pi / 6.0, 1e-10);
  }
}

TEST(RandomStream, DeterministicAndInRange) {
  RandomStream a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    differs = differs || u != c.uniform();
  }
  EXPECT_TRUE(differs);
}

TEST(RandomStream, NormalMoments) {
  RandomStream rng(5);
  double s = 0, s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    s += z;
    s2 += z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(DeriveSeed, OrderSensitiveAndStable) {
  EXPECT_EQ(derive_seed(1, {2, 3}), derive_seed(1, {2, 3}));
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
  EXPECT_NE(derive_seed(1, {2}), derive_seed(2, {2}));
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i] += 1; });
  for (int h : hits) EXPECT_EQ(h, 1);
  EXPECT_THROW(parallel_for(10, 2, [](std::size_t i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}

TEST(Stats, OlsRecoversLine) {
  const std::vector<double> x{1, 2, 3, 4, 5}, y{3, 5, 7, 9, 11};
  const auto f = stats::ols(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(f.intercept, 1.0, 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(Stats, LogLogFitSkipsNonpositive) {
  const std::vector<double> x{1, 2, 4, 8, 16}, y{1, 0.25, 0.0625, 0.0, 1.0 / 256};
  const auto f = stats::log_log_fit(x, y);
  EXPECT_NEAR(f.slope, -2.0, 1e-12);
  EXPECT_EQ(f.points, 4u);
}

TEST(Stats, MedianQuantileSpearman) {
  EXPECT_DOUBLE_EQ(stats::median({3, 1, 2}), 2.0);
  EXPECT_DOUBLE_EQ(stats::median({4, 1, 2, 3}), 2.5);
  EXPECT_DOUBLE_EQ(stats::quantile({0, 10}, 0.25), 2.5);
  const std::vector<double> a{1, 2, 3, 4}, b{10, 20, 30, 40}, c{4, 3, 2, 1};
  EXPECT_NEAR(stats::spearman(a, b), 1.0, 1e-12);
  EXPECT_NEAR(stats::spearman(a, c), -1.0, 1e-12);
  const std::vector<double> ties{1, 1, 2, 2};
  EXPECT_NEAR(stats::spearman(ties, ties), 1.0, 1e-12);
}

TEST(Stats, LogSpaceEndpoints) {
  const auto g = stats::log_space(1e-3, 1.0, 4);
  ASSERT_EQ(g.size(), 4u);
  EXPECT_NEAR(g[0], 1e-3, 1e-18);
  EXPECT_NEAR(g[1], 1e-2, 1e-15);
  EXPECT_NEAR(g[3], 1.0, 1e-15);
}

TEST(Format, RoundTripsAndSpecialValues) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.0, 8.0 / 19.0}) {
    EXPECT_EQ(parse_number(format_number(v)), v);
  }
  EXPECT_EQ(format_number(kInfinity), "inf");
  EXPECT_TRUE(std::isinf(parse_number("inf")));
  EXPECT_THROW(parse_number("1,5"), std::invalid_argument);
  EXPECT_THROW(parse_number("abc"), std::invalid_argument);
}

}  // namespace
}  // namespace svmrates
