#include <cmath>

#include <gtest/gtest.h>

#include "svmrates/kernel.hpp"
#include "svmrates/svm.hpp"

namespace svmrates {
namespace {

TrainingSet points_1d(std::initializer_list<double> xs, std::initializer_list<int> ys) {
  PointMatrix p(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) p(i++, 0) = x;
  return TrainingSet(p, std::vector<int>(ys), 0);
}

SvmProblem random_problem(std::uint64_t seed, bool offset) {
  RandomStream rng(seed);
  const std::size_t n = 10 + static_cast<std::size_t>(rng.uniform() * 191);
  const double lambda = std::pow(10.0, rng.uniform(-3, 0));
  const double sigma = std::pow(2.0, rng.uniform(0, 4));
  return {sample(SyntheticDistribution::power_margin(1.0), n, seed + 1), lambda,
          GaussianKernel(sigma), offset};
}

// λ cᵀKc + (1/n) Σ max(0, 1 - y_i((Kc)_i + b)), computed from the Gram matrix.
double gram_objective(const SvmProblem& p, const Eigen::MatrixXd& K, const Eigen::VectorXd& c, double b) {
  const Eigen::VectorXd f = K * c;
  double h = 0;
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    h += std::max(0.0, 1.0 - p.training_set.label(static_cast<std::size_t>(i)) * (f(i) + b));
  }
  return p.lambda * c.dot(f) + h / static_cast<double>(f.size());
}

TEST(Objective, ClosedFormValues) {
  const auto t = points_1d({0.0}, {1});
  const GaussianKernel k(1.0);
  const PointMatrix c0 = t.points();
  EXPECT_DOUBLE_EQ(objective({t, 0.3, k, false}, KernelExpansion(k, c0, Eigen::VectorXd::Zero(1))), 1.0);
  EXPECT_NEAR(objective({t, 0.5, k, false}, KernelExpansion(k, c0, Eigen::VectorXd::Constant(1, 1.0))), 0.5, 1e-15);
  EXPECT_NEAR(objective({t, 2.0, k, false}, KernelExpansion(k, c0, Eigen::VectorXd::Constant(1, 0.25))), 0.875, 1e-15);
}

TEST(Train, SinglePointClosedForm) {
  // λc² + max(0, 1 - c) is minimized at c = min(1, 1/(2λ)).
  const auto t = points_1d({0.0}, {1});
  for (auto route : {SolverRoute::coordinate, SolverRoute::projected_gradient}) {
    SolverOptions o;
    o.route = route;
    const auto a = train({t, 0.5, GaussianKernel(1.0), false}, o);
    EXPECT_NEAR(a.expansion.coefficients()(0), 1.0, 1e-6);
    EXPECT_NEAR(a.objective, 0.5, 1e-6);
    const auto b = train({t, 2.0, GaussianKernel(1.0), false}, o);
    EXPECT_NEAR(b.expansion.coefficients()(0), 0.25, 1e-6);
    EXPECT_NEAR(b.objective, 0.875, 1e-6);
  }
}

TEST(Train, SymmetricPairWithOffset) {
  // x = ±1/2 with labels ±1: b = 0 by symmetry and f = c(k(1/2,·) - k(-1/2,·)).
  // With κ = e^{-σ²} and u = c(1 - κ) the objective is 2λu²/(1-κ) + max(0, 1 - u),
  // minimized at u = min(1, (1-κ)/(4λ)).
  const auto t = points_1d({-0.5, 0.5}, {-1, 1});
  const double kappa = std::exp(-1.0);
  for (double lambda : {0.1, 1.0}) {
    const double u = std::min(1.0, (1.0 - kappa) / (4.0 * lambda));
    const double obj = 2.0 * lambda * u * u / (1.0 - kappa) + std::max(0.0, 1.0 - u);
    const auto s = train({t, lambda, GaussianKernel(1.0), true});
    EXPECT_NEAR(s.objective, obj, 1e-6) << lambda;
    EXPECT_NEAR(s.expansion.offset(), 0.0, 1e-6);
    const double x[1] = {0.5};
    EXPECT_NEAR(s.expansion(x), u, 1e-4);
  }
}

TEST(Train, DegenerateLabelsWithOffset) {
  const auto t = points_1d({-0.3, 0.1, 0.8}, {1, 1, 1});
  const auto s = train({t, 0.1, GaussianKernel(2.0), true});
  EXPECT_DOUBLE_EQ(s.expansion.offset(), 1.0);
  EXPECT_DOUBLE_EQ(s.expansion.rkhs_norm(), 0.0);
  EXPECT_DOUBLE_EQ(s.objective, 0.0);
  const auto check = offset_bound_check(s);
  EXPECT_TRUE(check.holds);
  EXPECT_NEAR(check.slack, 0.0, 1e-6);
  const auto neg = train({points_1d({0.2}, {-1}), 0.1, GaussianKernel(2.0), true});
  EXPECT_DOUBLE_EQ(neg.expansion.offset(), -1.0);
}

TEST(Train, ContradictoryPairTiesAtZeroOffset) {
  const auto t = points_1d({0.4, 0.4}, {1, -1});
  const auto s = train({t, 0.1, GaussianKernel(2.0), true});
  EXPECT_NEAR(s.objective, 1.0, 1e-8);
  EXPECT_DOUBLE_EQ(s.expansion.offset(), 0.0);
  EXPECT_NEAR(s.expansion.rkhs_norm(), 0.0, 1e-8);
}

TEST(OptimalOffset, MinimalMagnitude) {
  Eigen::VectorXd f(4);
  f << 0.0, 0.0, 0.0, 0.0;
  // Two of each label with f = 0: any b in [-1, 1] is optimal.
  EXPECT_DOUBLE_EQ(optimal_offset(f, {1, 1, -1, -1}), 0.0);
  // Three positives, one negative: the hinge sum decreases until b = 1.
  EXPECT_DOUBLE_EQ(optimal_offset(f, {1, 1, 1, -1}), 1.0);
  f << 2.0, 2.0, -0.5, -0.5;
  // Positives satisfied for b >= -1, negatives for b <= -0.5: 0 is not optimal.
  EXPECT_DOUBLE_EQ(optimal_offset(f, {1, 1, -1, -1}), -0.5);
}

TEST(Train, SeededProblemsAreCertified) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto p = random_problem(1000 + s, s % 2 == 1);
    const auto sol = train(p);
    const double n = static_cast<double>(p.training_set.size());
    EXPECT_LE(sol.certificate, 1e-8 * n);
    EXPECT_NEAR(sol.objective, objective(p, sol.expansion), 1e-12);
    EXPECT_LE(sol.dual_objective, sol.objective + 1e-12);
    EXPECT_TRUE(norm_bound_check(sol, p.lambda).holds);
    if (p.with_offset) {
      EXPECT_TRUE(offset_bound_check(sol).holds);
    }
    for (Eigen::Index i = 0; i < sol.alpha.size(); ++i) {
      EXPECT_GE(sol.alpha(i), 0.0);
      EXPECT_LE(sol.alpha(i), 1.0 / n + 1e-15);
    }
  }
}

TEST(Train, RandomProbesNeverBeatCertifiedBound) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto p = random_problem(2000 + s, s % 2 == 1);
    const Eigen::MatrixXd K = gram(p.kernel, p.training_set.points());
    const auto sol = train(p, K);
    RandomStream rng(s);
    const auto n = static_cast<Eigen::Index>(p.training_set.size());
    double best = HUGE_VAL;
    for (int probe = 0; probe < 1000; ++probe) {
      Eigen::VectorXd c(n);
      // Half the probes are small perturbations of the solution.
      const bool local = probe % 2 == 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        c(i) = local ? sol.expansion.coefficients()(i) + 1e-3 * rng.normal() / static_cast<double>(n)
                     : rng.normal() / (p.lambda * static_cast<double>(n));
      }
      const double b = p.with_offset ? sol.expansion.offset() + (local ? 1e-3 : 1.0) * rng.normal() : 0.0;
      best = std::min(best, gram_objective(p, K, c, b));
    }
    // The dual value certifies P* >= objective - certificate.
    EXPECT_LE(sol.dual_objective, best + 1e-12) << s;
    EXPECT_LE(sol.objective - sol.certificate, best + 1e-12) << s;
  }
}

TEST(Train, RoutesAgree) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto p = random_problem(3000 + s, s % 2 == 1);
    SolverOptions pg;
    pg.route = SolverRoute::projected_gradient;
    const auto a = train(p);
    const auto b = train(p, pg);
    const double tol = default_tolerance(p.training_set.size());
    EXPECT_NEAR(a.objective, b.objective, 2.0 * tol) << s;
  }
}

TEST(Train, StandardScalingEquivalence) {
  // ½‖f‖² + C Σ hinge with C = 1/(2λn) equals P(f)/(2λ), so both forms share
  // the minimizer; the projected-gradient route solves the C-form dual.
  const auto p = random_problem(4000, false);
  SolverOptions pg;
  pg.route = SolverRoute::projected_gradient;
  const auto sol = train(p, pg);
  const auto& t = p.training_set;
  const double C = 1.0 / (2.0 * p.lambda * static_cast<double>(t.size()));
  double hinge = 0;
  for (std::size_t i = 0; i < t.size(); ++i) hinge += std::max(0.0, 1.0 - t.label(i) * sol.expansion(t.point(i)));
  const double standard = 0.5 * sol.expansion.rkhs_norm_squared() + C * hinge;
  EXPECT_NEAR(standard, sol.objective / (2.0 * p.lambda), 1e-10);
  EXPECT_NEAR(sol.objective, train(p).objective, 2.0 * default_tolerance(t.size()));
}

TEST(Train, DecisionFunctionIsUnique) {
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto p = random_problem(5000 + s, s % 2 == 1);
    SolverOptions o1, o2;
    o1.order_seed = 11;
    o2.order_seed = 12;
    const auto a = train(p, o1), b = train(p, o2);
    const auto& t = p.training_set;
    double l2 = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double d = a.expansion(t.point(i)) - b.expansion(t.point(i));
      l2 += d * d;
    }
    l2 = std::sqrt(l2 / static_cast<double>(t.size()));
    // λ‖f - f*‖² <= P(f) - P* <= certificate, and the empirical norm is
    // dominated by the RKHS norm since k(x, x) = 1.
    const double bound = std::sqrt(a.certificate / p.lambda) + std::sqrt(b.certificate / p.lambda);
    EXPECT_LE(l2, bound + 1e-12) << s;
  }
}

TEST(Train, NormShrinksWithLambda) {
  const auto t = sample(SyntheticDistribution::power_margin(1.0), 60, 8);
  double prev = HUGE_VAL;
  for (double lambda : {1.0, 10.0, 100.0}) {
    const auto s = train({t, lambda, GaussianKernel(3.0), false});
    const double norm = s.expansion.rkhs_norm();
    EXPECT_LT(norm, prev);
    EXPECT_LE(norm, 1.0 / std::sqrt(lambda) + 1e-6);
    prev = norm;
  }
  const auto s = train({t, 0.01, GaussianKernel(3.0), false});
  EXPECT_LE(s.expansion.rkhs_norm(), 10.0 + 1e-6);
}

TEST(Train, RejectsBadInput) {
  const auto t = points_1d({0.0}, {1});
  EXPECT_THROW(train({t, 0.0, GaussianKernel(1.0), false}), std::invalid_argument);
  SolverOptions tiny;
  tiny.max_passes = 1;
  tiny.tol_opt = 1e-300;
  const auto p = random_problem(6000, false);
  EXPECT_THROW(train(p, tiny), SolverError);
}

}  // namespace
}  // namespace svmrates
