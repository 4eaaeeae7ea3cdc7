#include <cmath>

#include <gtest/gtest.h>

#include "cover_oracle.hpp"
#include "svmrates/complexity.hpp"
#include "svmrates/stats.hpp"

namespace svmrates {
namespace {

PointMatrix column(std::initializer_list<double> xs) {
  PointMatrix p(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  return p;
}

TEST(CoverProfile, SmallCases) {
  const auto one = cover_profile(column({0.3}), 2.0);
  ASSERT_EQ(one.semi_axes.size(), 1u);
  EXPECT_NEAR(one.semi_axes[0], 1.0, 1e-12);
  const auto dup = cover_profile(column({0.3, 0.3}), 2.0);
  EXPECT_NEAR(dup.semi_axes[0], 1.0, 1e-12);
  EXPECT_NEAR(dup.semi_axes[1], 0.0, 1e-6);
  const auto far = cover_profile(column({-1.0, 1.0}), 20.0);
  EXPECT_NEAR(far.semi_axes[0], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(far.semi_axes[1], std::sqrt(0.5), 1e-12);
}

TEST(CoverBounds, Values) {
  const auto one = cover_profile(column({0.0}), 1.0);
  const auto b = log_cover_bounds(one, std::exp(-1.0));
  EXPECT_NEAR(b.lower, 1.0, 1e-12);
  EXPECT_NEAR(b.upper, std::log(1.0 + 4.0 * std::exp(1.0)), 1e-12);
  EXPECT_EQ(log_cover_bounds(one, 1.0).lower, 0.0);
  const auto p = cover_profile(sample(SyntheticDistribution::power_margin(1.0), 50, 2).points(), 4.0);
  double lo = -1, up = -1;
  for (double eps = 1.0; eps > 1e-3; eps /= 2) {
    const auto c = log_cover_bounds(p, eps);
    EXPECT_GE(c.lower, lo);
    EXPECT_GE(c.upper, up);
    EXPECT_LE(c.lower, c.upper);
    lo = c.lower, up = c.upper;
  }
}

TEST(CoverBounds, BracketGreedyOracle) {
  const std::vector<PointMatrix> sets{column({0.1}), column({-0.4, 0.5}), column({-0.8, 0.0, 0.6})};
  for (const auto& pts : sets) {
    for (double sigma : {1.0, 3.0}) {
      const auto prof = cover_profile(pts, sigma);
      for (double eps : {0.1, 0.2, 0.4}) {
        const double greedy = std::log(static_cast<double>(testing::greedy_cover(pts, sigma, eps, 7)));
        const auto b = log_cover_bounds(prof, eps);
        EXPECT_LE(b.lower, greedy + 1e-9) << pts.rows() << " " << sigma << " " << eps;
        EXPECT_GE(b.upper, greedy) << pts.rows() << " " << sigma << " " << eps;
      }
    }
  }
}

TEST(Rademacher, ExactSmallCases) {
  const int plus[1] = {1}, minus[1] = {-1};
  EXPECT_NEAR(rademacher_exact(column({0.2}), 3.0, plus), 1.0, 1e-15);
  EXPECT_NEAR(rademacher_exact(column({0.2}), 3.0, minus), 1.0, 1e-15);
  const int pm[2] = {1, -1}, pp[2] = {1, 1};
  EXPECT_NEAR(rademacher_exact(column({0.2, 0.2}), 3.0, pm), 0.0, 1e-7);
  EXPECT_NEAR(rademacher_exact(column({0.2, 0.2}), 3.0, pp), 1.0, 1e-15);
  const double kappa = std::exp(-1.0);
  EXPECT_NEAR(rademacher_exact(column({0.0, 1.0}), 1.0, pm), 0.5 * std::sqrt(2.0 - 2.0 * kappa), 1e-15);
}

TEST(Rademacher, DecreasesWithN) {
  const auto d = SyntheticDistribution::power_margin(1.0);
  double prev = HUGE_VAL;
  for (std::size_t n : {10u, 40u, 160u}) {
    std::vector<double> vals;
    for (std::uint64_t r = 0; r < 20; ++r) {
      vals.push_back(rademacher_average(sample(d, n, 100 + r).points(), 4.0, 20, r).value);
    }
    const double m = stats::median(vals);
    EXPECT_LT(m, prev);
    prev = m;
  }
}

TEST(ScalingScan, EpsilonAndSigmaSlopes) {
  const auto pts = sample(SyntheticDistribution::power_margin(1.0), 200, 11).points();
  std::vector<double> eps;
  for (int k = 8; k >= 1; --k) eps.push_back(std::ldexp(1.0, -k));
  const auto r = cover_scaling_scan(pts, {1, 2, 4, 8, 16, 32}, eps);
  EXPECT_EQ(r.rows.size(), 48u);
  for (double s : r.epsilon_slopes) EXPECT_LE(s, 2.1);
  for (double s : r.sigma_slopes) EXPECT_LE(s, 1.2);
  EXPECT_EQ(r.local_epsilon_slopes.size(), r.local_sigma_slopes.size());
  EXPECT_THROW(cover_scaling_scan(pts, {1, 2}, eps), std::invalid_argument);
}

}  // namespace
}  // namespace svmrates
