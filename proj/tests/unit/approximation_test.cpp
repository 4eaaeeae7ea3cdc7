#include <cmath>

#include <gtest/gtest.h>

#include "svmrates/approximation.hpp"

namespace svmrates {
namespace {

TEST(BoundRhs, CouplingGivesExactSlope) {
  EXPECT_GE(approx_bound_rhs(1.0, 1.0, 2.0, 1.0, 1), 1.0);
  EXPECT_DOUBLE_EQ(optimal_sigma(1e-4, 1.0, 1), 100.0);
  for (double alpha : {1.0, 2.0, 3.5}) {
    std::vector<double> lambdas = stats::log_space(1e-6, 1e-1, 8), rhs;
    for (double l : lambdas) rhs.push_back(approx_bound_rhs(optimal_sigma(l, alpha, 1), l, alpha, 0.7, 1));
    EXPECT_NEAR(stats::log_log_fit(lambdas, rhs).slope, alpha / (alpha + 1.0), 1e-6);
  }
}

TEST(Witness, ValidityAndTrivialBound) {
  const auto d = SyntheticDistribution::power_margin(1.0);
  for (double sigma : {1.0, 4.0, 16.0}) {
    for (double lambda : {1e-4, 1e-2, 1.0}) {
      const auto w = approx_error_witness(d, sigma, lambda);
      EXPECT_GE(w.value, 0.0);
      EXPECT_GE(w.value, w.norm_term - 1e-8);
      EXPECT_LE(w.value, w.norm_term + 1.0);
      EXPECT_NEAR(w.value, w.norm_term + w.risk_term.value, 1e-15);
    }
  }
}

TEST(Witness, SeparatedRiskTermNegligibleAtLargeSigma) {
  const auto d = SyntheticDistribution::separated(0.5, 1);
  const auto w = approx_error_witness(d, 16.0, 1e-6);
  EXPECT_LE(w.value, w.norm_term + 1e-3);
}

TEST(Witness, SigmaTradeOffHasInteriorMinimum) {
  const auto d = SyntheticDistribution::power_margin(1.0);
  std::vector<double> v;
  for (double s : {1.0, 2.0, 4.0, 8.0, 16.0, 32.0}) v.push_back(approx_error_witness(d, s, 1e-3).value);
  const auto it = std::min_element(v.begin(), v.end());
  EXPECT_NE(it, v.begin());
  EXPECT_NE(it, v.end() - 1);
  for (auto p = v.begin(); p + 1 <= it; ++p) EXPECT_GT(*p, *(p + 1));
  for (auto p = it; p + 1 < v.end(); ++p) EXPECT_LT(*p, *(p + 1));
}

TEST(Witness, NondecreasingInLambda) {
  const auto d = SyntheticDistribution::weighted_power_margin(2.0, 1.0);
  for (double s : {2.0, 8.0}) {
    double prev = -1.0;
    for (double l : {1e-5, 1e-4, 1e-3, 1e-2, 1e-1}) {
      const double v = approx_error_witness(d, s, l).value;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Empirical, BelowWitnessAndMonotone) {
  const auto d = SyntheticDistribution::power_margin(1.0);
  ApproxOptions o;
  o.n_dense = 400;
  const auto e = approx_error_empirical(d, 8.0, 1e-3, o);
  EXPECT_EQ(e.per_seed.size(), o.empirical_seeds);
  EXPECT_LE(e.value, approx_error_witness(d, 8.0, 1e-3, o).value + 0.05);
  const auto big = approx_error_empirical(d, 8.0, 1e-2, o);
  EXPECT_GE(big.value, e.value - 1e-6);
  // λ >= 1: f = 0 is nearly optimal and the value stays below 1 - hinge_risk_min.
  const auto huge = approx_error_empirical(d, 8.0, 10.0, o);
  EXPECT_LE(huge.value, 1.0 - hinge_risk_min(d).value + 0.02);
}

TEST(Decay, PowerMarginSlope) {
  const auto d = SyntheticDistribution::power_margin(1.0);
  const auto fit = decay_slope(d, stats::log_space(1e-4, 1e-1, 7), 2.0, 1);
  EXPECT_GE(fit.fit.slope, 2.0 / 3.0 - 0.1);
  EXPECT_NEAR(fit.sigmas.front(), std::pow(1e-4, -1.0 / 3.0), 1e-9);
}

TEST(Decay, SeparatedLinearAtFixedSigma) {
  const auto d = SyntheticDistribution::separated(0.5, 1);
  const auto fit = decay_slope(d, stats::log_space(1e-4, 1e-1, 7), kInfinity, 1, 16.0);
  EXPECT_GE(fit.fit.slope, 0.9);
  EXPECT_THROW(decay_slope(d, stats::log_space(1e-4, 1e-1, 7), kInfinity, 1), std::invalid_argument);
}

TEST(RatioScan, BoundedAndStable) {
  const auto d = SyntheticDistribution::power_margin(1.0);
  const std::vector<double> sig{2, 4, 8, 16, 32}, lam{1e-5, 1e-4, 1e-3, 1e-2, 1e-1};
  const auto coarse = approx_ratio_scan(d, sig, lam);
  const auto fine = approx_ratio_scan(d, refine_geometric_grid(sig), refine_geometric_grid(lam));
  EXPECT_EQ(coarse.rows.size(), 25u);
  EXPECT_TRUE(std::isfinite(coarse.max_ratio));
  EXPECT_LT(std::abs(fine.max_ratio - coarse.max_ratio) / coarse.max_ratio, 0.2);
}

TEST(RefineGrid, GeometricMidpoints) {
  const auto g = refine_geometric_grid({1.0, 4.0, 16.0});
  ASSERT_EQ(g.size(), 5u);
  EXPECT_NEAR(g[1], 2.0, 1e-12);
  EXPECT_NEAR(g[3], 8.0, 1e-12);
}

}  // namespace
}  // namespace svmrates
