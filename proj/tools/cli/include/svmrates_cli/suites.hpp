#pragma once

// Seeded property suites run by `svmrates check` and the acceptance binary.

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "svmrates/distributions.hpp"
#include "svmrates/kernel.hpp"

namespace svmrates::cli {

struct CaseResult {
  std::string suite;
  std::string name;
  double value = 0.0;
  // "<=" or ">=": the case passes when `value relation threshold`.
  std::string relation;
  double threshold = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::string name;
  std::vector<CaseResult> cases;
  std::size_t failures() const;
  bool pass() const { return failures() == 0; }
  // Smallest value - threshold for ">=" cases, largest for "<=" cases.
  double worst() const;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t jobs = 1;
  IntegrationOptions integration{};
};

// Continuous piecewise-linear function on [-1, 1] with `knots` uniform
// knots and values uniform in [-amplitude, amplitude].
FieldFunction random_piecewise_linear(std::uint64_t seed, std::size_t knots = 8,
                                      double amplitude = 2.0);

// Expansion with `centers` uniform centers in [-1, 1], normal coefficients,
// rescaled to RKHS norm `norm`.
KernelExpansion random_expansion(std::uint64_t seed, double sigma, std::size_t centers,
                                 double norm);

// Pointwise hinge variance inequality, one case per p, minimum slack over
// t ∈ {-3.0, -2.9, ..., 3.0}; p ∈ {0.505, ..., 0.995, 1.0} and the mirror
// values 1 - p.
SuiteResult pointwise_variance_suite();

// Direct excess hinge risk against ∫|2η-1||f - f_P| dP_X for clipped random
// functions on power_margin(γ), γ ∈ {0.5, 1, 2}.
SuiteResult zhang_identity_suite(std::size_t per_family, const SuiteOptions& opts);

// Random problems with n <= 200: duality gap, norm bound, and (for the
// offset half) the offset bound.
SuiteResult solver_suite(std::size_t problems, const SuiteOptions& opts);

// Offset bound on random with-offset problems.
SuiteResult offset_bound_suite(std::size_t problems, const SuiteOptions& opts);

// Variance bound margin on power_margin(1), q = 1, for clipped random
// functions.
SuiteResult variance_bound_suite(std::size_t count, const SuiteOptions& opts);

// Regularized variance bound on power_margin(1) at λ = 0.01, σ = 4 for
// random elements of γB_H, γ <= λ^{-1/2}, against the dense SVM solution.
SuiteResult regularized_variance_suite(std::size_t count, const SuiteOptions& opts);

// Clipping never increases the excess hinge risk.
SuiteResult clipping_suite(std::size_t count, const SuiteOptions& opts);

}  // namespace svmrates::cli
