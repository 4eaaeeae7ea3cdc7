#pragma once

// Constructive element of the Gaussian RKHS used to bound the approximation
// error. On the enlarged domain 3X the target
//
//   f'(y) = +1 where extended_eta(y) > 1/2, -1 where < 1/2, 0 otherwise
//
// is scaled to g = (σ²/π)^{d/4} f' ∈ L2(R^d) and pushed through the
// isometry V_σ : L2(R^d) -> H_σ(R^d),
//
//   V_σ g(x) = (2σ²/π)^{d/2} ∫_{3X} exp(-2σ²|x - y|²) f'(y) dy,
//
// which takes values in [-1, 1]. Its RKHS norm equals ‖g‖_{L2}.

#include <span>

#include "svmrates/distributions.hpp"
#include "svmrates/numeric.hpp"

namespace svmrates {

struct WitnessOptions {
  // Composite Gauss–Legendre panels are doubled until two successive values
  // differ by less than this. The integrand is a Gaussian of width 1/σ in a
  // window of ±sqrt(20)/σ, so the panel count needed does not grow with σ.
  double refine_tol = 1e-5;
  int order_1d = 16;
  int order_2d = 8;
  int max_panels_1d = 4096;
  int max_panels_2d = 64;
};

class ApproxWitness {
 public:
  // Supports d = 1 and d = 2.
  ApproxWitness(SyntheticDistribution dist, double sigma, WitnessOptions opts = {});

  double sigma() const noexcept { return sigma_; }
  const SyntheticDistribution& distribution() const noexcept { return dist_; }

  // f'(y) on the enlarged domain (0 outside 3X).
  double extended_target(std::span<const double> y) const;

  // V_σ g(x) with the achieved refinement difference as the error.
  Estimate evaluate(std::span<const double> x) const;
  double operator()(std::span<const double> x) const { return evaluate(x).value; }
  FieldFunction as_function() const;

  // ‖g‖²_{L2} = (σ²/π)^{d/2} vol(3X_1 ∪ 3X_{-1}); the neutral set of every
  // built-in family is Lebesgue-null, so the volume is 3^d vol(X).
  double g_norm_squared() const;
  // (81σ²/π)^{d/2} vol(X)².
  double g_norm_squared_bound() const;

 private:
  double sum_1d(double x, int panels) const;
  double sum_2d(double x0, double x1, int panels) const;
  Estimate refine(std::span<const double> x) const;

  SyntheticDistribution dist_;
  double sigma_;
  WitnessOptions opts_;
  quad::GaussLegendreRule rule_1d_;
  quad::GaussLegendreRule rule_2d_;
  // Panel count reached by refinement at probe points during construction;
  // every evaluation starts there, so V_σ g is a smooth function of x.
  int base_panels_ = 1;
};

}  // namespace svmrates
