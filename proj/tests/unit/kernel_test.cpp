#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "svmrates/kernel.hpp"
#include "svmrates/witness.hpp"

namespace svmrates {
namespace {

PointMatrix column(std::initializer_list<double> xs) {
  PointMatrix p(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  return p;
}

TEST(Kernel, Values) {
  const double a[2] = {0.3, -0.2}, zero[2] = {0, 0}, e1[2] = {1, 0};
  EXPECT_DOUBLE_EQ(GaussianKernel(3.0)(a, a), 1.0);
  EXPECT_NEAR(GaussianKernel(1.0)(zero, e1), 0.36787944117144233, 1e-15);
  const double h[2] = {0.5, 0.0};
  EXPECT_NEAR(GaussianKernel(2.0)(zero, h), std::exp(-1.0), 1e-15);
  EXPECT_THROW(GaussianKernel(0.0), std::invalid_argument);
}

TEST(Kernel, GramIsPsd) {
  RandomStream rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 5 + static_cast<int>(rng.uniform() * 60);
    const int d = 1 + trial % 3;
    PointMatrix p(n, d);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < d; ++k) p(i, k) = rng.uniform(-1, 1);
    const double sigma = std::pow(2.0, rng.uniform(-1, 5));
    const Eigen::MatrixXd K = gram(GaussianKernel(sigma), p);
    const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues().minCoeff();
    EXPECT_GE(min_eig, -1e-8 * n);
    EXPECT_TRUE(K.isApprox(K.transpose()));
  }
}

TEST(Kernel, CrossGramMatchesPointwise) {
  const auto a = column({-0.5, 0.1}), b = column({0.2, 0.7, -1.0});
  const GaussianKernel k(1.7);
  const auto C = cross_gram(k, a, b);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) EXPECT_NEAR(C(i, j), std::exp(-1.7 * 1.7 * std::pow(a(i, 0) - b(j, 0), 2)), 1e-15);
}

TEST(Expansion, Norms) {
  const KernelExpansion single(GaussianKernel(2.0), column({0.4}), Eigen::VectorXd::Constant(1, 2.0));
  EXPECT_NEAR(single.rkhs_norm(), 2.0, 1e-15);
  Eigen::VectorXd c(2);
  c << 1.0, -1.0;
  const KernelExpansion dup(GaussianKernel(2.0), column({0.4, 0.4}), c, 0.25);
  EXPECT_NEAR(dup.rkhs_norm(), 0.0, 1e-12);
  const double x[1] = {-0.3};
  EXPECT_NEAR(dup(x), 0.25, 1e-15);
  EXPECT_NEAR(dup.function_part(x), 0.0, 1e-15);
}

TEST(Expansion, ReproducingBound) {
  RandomStream rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    PointMatrix p(8, 1);
    Eigen::VectorXd c(8);
    for (int i = 0; i < 8; ++i) p(i, 0) = rng.uniform(-1, 1), c(i) = rng.normal();
    const KernelExpansion f(GaussianKernel(rng.uniform(0.5, 10)), p, c, rng.normal());
    double sup = 0.0;
    for (int g = 0; g < 1000; ++g) {
      const double x[1] = {-1.0 + 2.0 * g / 999.0};
      sup = std::max(sup, std::abs(f(x) - f.offset()));
    }
    EXPECT_LE(sup, f.rkhs_norm() + 1e-12);
  }
}

TEST(Clip, Truncates) {
  const FieldFunction three = [](std::span<const double>) { return 3.0; };
  const FieldFunction wave = [](std::span<const double> x) { return std::sin(5 * x[0]); };
  const double x[1] = {0.37};
  EXPECT_EQ(clip(three)(x), 1.0);
  EXPECT_EQ(clip(wave)(x), wave(x));
  EXPECT_EQ(clip_value(-4.0), -1.0);
}

// V_σ g for power_margin on d = 1: the target is sign(y) on [-3, 3], so with
// s = √2 σ the convolution is erf(s x) + (erf(s(3 - x)) - erf(s(3 + x)))/2.
double witness_oracle(double sigma, double x) {
  const double s = std::numbers::sqrt2 * sigma;
  return std::erf(s * x) + 0.5 * (std::erf(s * (3.0 - x)) - std::erf(s * (3.0 + x)));
}

TEST(Witness, MatchesErfClosedForm) {
  const auto d = SyntheticDistribution::power_margin(1.0);
  for (double sigma : {0.7, 2.0, 8.0, 40.0}) {
    const ApproxWitness w(d, sigma);
    for (double x : {-1.0, -0.6, -0.05, 0.0, 0.013, 0.4, 1.0}) {
      const double xs[1] = {x};
      EXPECT_NEAR(w(xs), witness_oracle(sigma, x), 1e-5) << sigma << " " << x;
    }
    // ‖g‖² = (σ²/π)^{1/2} · 6.
    EXPECT_NEAR(w.g_norm_squared(), sigma / std::sqrt(std::numbers::pi) * 6.0, 1e-12);
    EXPECT_LE(w.g_norm_squared(), w.g_norm_squared_bound());
  }
}

TEST(Witness, BoundedAndTailBound) {
  for (const auto& d : {SyntheticDistribution::power_margin(2.0),
                        SyntheticDistribution::weighted_power_margin(1.0, 2.0),
                        SyntheticDistribution::separated(0.5, 1)}) {
    for (double sigma : {1.0, 4.0, 16.0}) {
      const ApproxWitness w(d, sigma);
      for (int g = 0; g <= 200; ++g) {
        const double x[1] = {-1.0 + g / 100.0};
        const double v = w(x);
        EXPECT_LE(std::abs(v), 1.0 + 1e-6);
        if (d.in_domain(x) && d.eta(x) > 0.5) {
          const double t = d.tau(x);
          EXPECT_GE(v, 1.0 - 8.0 * std::exp(-sigma * sigma * t * t / 2.0) - 1e-5);
        }
      }
    }
  }
}

TEST(Witness, ApproachesSignOnSeparatedSupport) {
  const auto d = SyntheticDistribution::separated(0.5, 1);
  const double x[1] = {0.3};
  double prev = 2.0;
  for (double sigma : {4.0, 8.0, 16.0}) {
    const double gap = 1.0 - ApproxWitness(d, sigma)(x);
    EXPECT_LT(gap, prev);
    prev = gap;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Witness, TwoDimensionalOddSymmetry) {
  const auto d = SyntheticDistribution::separated(0.5, 2);
  const ApproxWitness w(d, 3.0);
  const double a[2] = {0.6, 0.2}, b[2] = {-0.6, 0.2};
  EXPECT_NEAR(w(a), -w(b), 1e-5);
  EXPECT_GT(w(a), 0.9);
}

}  // namespace
}  // namespace svmrates
