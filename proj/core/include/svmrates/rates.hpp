#pragma once

// Learning-rate schedules, rate experiments and the variance inequalities
// behind them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "svmrates/distributions.hpp"
#include "svmrates/kernel.hpp"
#include "svmrates/svm.hpp"

namespace svmrates {

// Rate exponent β(q, α) for q ∈ [0, ∞], α ∈ (0, ∞]:
//   α/(2α+1)                      if α <= (q+2)/(2q),
//   2α(q+1)/(2α(q+2) + 3q + 4)    otherwise.
// Infinite arguments follow (a∞+b)/(c∞+d) := a/c: q = ∞ gives threshold 1/2
// and 2α/(2α+3); α = ∞ gives (q+1)/(q+2), or 1/2 when q = 0.
double beta(double q, double alpha);

struct RateSchedule {
  double q = 1.0;
  double alpha = 2.0;
  std::size_t d = 1;
  double beta = 0.0;
  // Set iff α = ∞; then λ_n = n^{-β} and σ_n is constant.
  std::optional<double> fixed_sigma;

  // n^{-β(α+1)/α}
  double lambda_of_n(std::size_t n) const;
  // n^{β/(αd)}, equal to λ_n^{-1/((α+1)d)}
  double sigma_of_n(std::size_t n) const;
};

// For α = ∞ the constant width defaults to 2√d + 1.
RateSchedule make_schedule(double q, double alpha, std::size_t d,
                           std::optional<double> fixed_sigma = std::nullopt);

struct ExperimentRow {
  std::size_t n = 0;
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  Estimate excess_risk;
  double excess_hinge_risk = 0.0;
  double rkhs_norm = 0.0;
  double offset = 0.0;
  double lambda = 0.0;
  double sigma = 0.0;
  double certificate = 0.0;
  double tolerance = 0.0;
  std::size_t iterations = 0;
  double wall_seconds = 0.0;
  // Empty on success; otherwise the failure and the row's numbers are unset.
  std::string diagnostic;

  bool ok() const noexcept { return diagnostic.empty(); }
};

struct ExperimentReport {
  std::string distribution;
  bool with_offset = false;
  std::uint64_t base_seed = 0;
  std::vector<ExperimentRow> rows;  // n-major, then trial
};

struct ExperimentOptions {
  bool with_offset = false;
  std::size_t jobs = 1;
  IntegrationOptions integration{};
  SolverOptions solver{};
};

// Row seed: derive_seed(base_seed, {n, trial}).
std::uint64_t row_seed(std::uint64_t base_seed, std::size_t n, std::size_t trial);

ExperimentReport run_experiment(const SyntheticDistribution& dist, const RateSchedule& schedule,
                                const std::vector<std::size_t>& n_grid, std::size_t trials,
                                std::uint64_t base_seed, const ExperimentOptions& opts = {});

struct RateFit {
  bool exact_learning = false;
  double beta_hat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double r_squared = 0.0;
  std::vector<std::size_t> n_values;
  std::vector<double> medians;
};

// Negated OLS slope of log median excess on log n, with a percentile
// bootstrap interval from resampling trials within each n.
RateFit fit_rate(const ExperimentReport& report, std::size_t bootstrap = 1000,
                 std::uint64_t seed = 1, double level = 0.95);

struct PointwiseVariance {
  double v = 0.0;
  double m = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
};

// With f* = sign(2p-1) and l the hinge loss,
//   v = p(l(1,t) - l(1,f*))² + (1-p)(l(-1,t) - l(-1,f*))²,
//   m = p(l(1,t) - l(1,f*))  + (1-p)(l(-1,t) - l(-1,f*)),
// slack = (|t| + 2/|2p-1|) m - v.
PointwiseVariance pointwise_variance(double p, double t);

// C_{η,q} = ‖(2η-1)^{-1}‖_{q,∞} + 2, or 1 for q = 0.
double variance_constant(const SyntheticDistribution& dist, double q,
                         const IntegrationOptions& opts = {});

struct VarianceCheck {
  double lhs = 0.0;       // E(l∘f - l∘f_P)²
  double excess = 0.0;    // E(l∘f - l∘f_P)
  double sup_f = 0.0;
  double constant = 0.0;  // C_{η,q}
  double rhs = 0.0;
  double margin = 0.0;    // rhs - lhs
};

// `sup_f` < 0 estimates ‖f‖_∞ by a grid scan (d = 1).
VarianceCheck variance_bound_check(const SyntheticDistribution& dist, const FieldFunction& f,
                                   double q, double sup_f = -1.0,
                                   const IntegrationOptions& opts = {});

struct RegularizedVarianceCheck {
  double lhs = 0.0;      // E(L∘f - L∘f0)²
  double excess = 0.0;   // E(L∘f - L∘f0), clamped at 0
  double constant = 0.0; // 16 + 8‖(2η-1)^{-1}‖_{q,∞}, or 8 for q = 0
  double c_hat = 0.0;    // (γ + 1)^{(q+2)/(q+1)}
  double rhs = 0.0;
  double margin = 0.0;
};

// Regularized loss L(x, y, f) = λ‖f‖² + l(y, f(x)) compared against the
// reference f0; `a` is the approximation-error value in the additive term.
RegularizedVarianceCheck regularized_variance_check(const SyntheticDistribution& dist,
                                                    const KernelExpansion& f,
                                                    const KernelExpansion& f0, double lambda,
                                                    double gamma, double q, double a,
                                                    const IntegrationOptions& opts = {});

}  // namespace svmrates
