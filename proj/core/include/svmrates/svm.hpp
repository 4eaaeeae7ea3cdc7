#pragma once

// Regularized empirical hinge-loss minimization over a Gaussian RKHS,
//
//   min_f  λ‖f‖²_H + (1/n) Σ max(0, 1 - y_i (f(x_i) + b)),
//
// with b = 0 (no offset) or b free and unpenalized (with offset).
//
// Both variants are solved in the dual with α_i ∈ [0, 1/n]:
//
//   D(α) = Σ α_i - λ‖f_α‖²,   f_α = (1/(2λ)) Σ α_i y_i k(x_i, ·),
//
// plus Σ α_i y_i = 0 when the offset is free. The certificate is the
// duality gap P(f_α, b) - D(α) with b chosen optimally for f_α.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "svmrates/distributions.hpp"
#include "svmrates/kernel.hpp"

namespace svmrates {

struct SvmProblem {
  TrainingSet training_set;
  double lambda;
  GaussianKernel kernel;
  bool with_offset = false;
};

enum class SolverRoute {
  // Cyclic coordinate ascent (no offset) or second-order SMO (offset).
  coordinate,
  // Accelerated projected gradient on the cost-parameter form
  // ½αᵀQα - Σα, 0 <= α <= 1/(2λn); used as an independent cross-check.
  projected_gradient,
};

struct SolverOptions {
  // Duality-gap target; 0 means 1e-8 · n.
  double tol_opt = 0.0;
  // One pass is n coordinate (or pair) updates, or one gradient step.
  std::size_t max_passes = 1'000'000;
  SolverRoute route = SolverRoute::coordinate;
  // Seeds the coordinate visiting order; 0 keeps the natural order.
  std::uint64_t order_seed = 0;
};

struct SvmSolution {
  KernelExpansion expansion;
  double objective = 0.0;
  double dual_objective = 0.0;
  double certificate = 0.0;
  std::size_t iterations = 0;
  double lambda = 0.0;
  // Dual variables in [0, 1/n].
  Eigen::VectorXd alpha;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double best_certificate, std::size_t iterations)
      : std::runtime_error(what), best_certificate_(best_certificate), iterations_(iterations) {}
  double best_certificate() const noexcept { return best_certificate_; }
  std::size_t iterations() const noexcept { return iterations_; }

 private:
  double best_certificate_;
  std::size_t iterations_;
};

// Primal objective of `f` on the problem's training set. Without offset the
// expansion's offset is ignored (b = 0).
double objective(const SvmProblem& problem, const KernelExpansion& f);

SvmSolution train(const SvmProblem& problem, const SolverOptions& opts = {});
// Same, reusing a precomputed Gram matrix of the training points.
SvmSolution train(const SvmProblem& problem, const Eigen::MatrixXd& gram_matrix,
                  const SolverOptions& opts = {});

double default_tolerance(std::size_t n);

// Offset minimizing (1/n) Σ max(0, 1 - y_i(f_i + b)) for fixed values f_i;
// among all minimizers the one of smallest magnitude.
double optimal_offset(const Eigen::VectorXd& f_values, const std::vector<int>& labels);

struct BoundCheck {
  bool holds = false;
  // bound - value; negative means violated.
  double slack = 0.0;
};

// ‖f‖_H <= λ^{-1/2} + tol.
BoundCheck norm_bound_check(const SvmSolution& solution, double lambda, double tol = 1e-6);

// |b| <= max |f| + 1 + tol with the maximum taken over the expansion's
// centers and, for d = 1, a uniform grid of [-1, 1].
BoundCheck offset_bound_check(const SvmSolution& solution, double tol = 1e-6);

}  // namespace svmrates
