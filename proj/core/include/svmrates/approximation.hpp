#pragma once

// Upper bounds on the approximation error
//
//   a_σ(λ) = inf_{f ∈ H_σ} λ‖f‖²_H + R_{l,P}(f) - R_{l,P}
//
// along two routes: the constructive witness V_σ g, and an SVM trained on a
// dense sample. Both give values of the objective at a concrete f, hence
// upper bounds.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "svmrates/distributions.hpp"
#include "svmrates/stats.hpp"
#include "svmrates/svm.hpp"
#include "svmrates/witness.hpp"

namespace svmrates {

struct ApproxOptions {
  IntegrationOptions integration{};
  WitnessOptions witness{};
  std::size_t n_dense = 1000;
  std::size_t empirical_seeds = 3;
  std::uint64_t seed = 1;
  SolverOptions solver{};
};

// Excess hinge risk of V_σ g; independent of λ.
Estimate witness_excess_risk(const SyntheticDistribution& dist, double sigma,
                             const ApproxOptions& opts = {});

struct WitnessValue {
  double value = 0.0;
  double norm_term = 0.0;  // λ‖g‖²
  Estimate risk_term;
};

WitnessValue approx_error_witness(const SyntheticDistribution& dist, double sigma,
                                  double lambda, const ApproxOptions& opts = {});

struct EmpiricalValue {
  // Mean over seeds, with the per-seed values and their standard error.
  double value = 0.0;
  double standard_error = 0.0;
  std::vector<double> per_seed;
};

// λ‖f_T‖² + excess hinge risk of the no-offset SVM on `n_dense` points,
// repeated for `empirical_seeds` seeds derived from `seed`.
EmpiricalValue approx_error_empirical(const SyntheticDistribution& dist, double sigma,
                                      double lambda, const ApproxOptions& opts = {});

// σ(λ) = λ^{-1/((α+1)d)}; α must be finite.
double optimal_sigma(double lambda, double alpha, std::size_t d);

struct DecayFit {
  stats::LinearFit fit;
  std::vector<double> lambdas;
  std::vector<double> sigmas;
  std::vector<double> values;
};

// OLS slope of log witness value on log λ along σ = σ(λ); for α = ∞ the
// σ stays at `fixed_sigma`.
DecayFit decay_slope(const SyntheticDistribution& dist, const std::vector<double>& lambda_grid,
                     double alpha, std::size_t d, double fixed_sigma = 0.0,
                     const ApproxOptions& opts = {});

// σ^d λ + C (2d)^{αd/2} σ^{-αd}.
double approx_bound_rhs(double sigma, double lambda, double alpha, double c_geo, std::size_t d);

struct ApproxRow {
  double sigma = 0.0;
  double lambda = 0.0;
  double witness = 0.0;
  // NaN when the empirical route was not requested.
  double empirical = 0.0;
  double empirical_error = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
};

struct RatioScan {
  std::vector<ApproxRow> rows;
  double max_ratio = 0.0;
  double argmax_sigma = 0.0;
  double argmax_lambda = 0.0;
};

// Witness / rhs over the (σ, λ) grid. `c_geo` <= 0 takes the family's
// analytic constant, or the fitted one when none is known.
RatioScan approx_ratio_scan(const SyntheticDistribution& dist,
                            const std::vector<double>& sigma_grid,
                            const std::vector<double>& lambda_grid, double c_geo = 0.0,
                            bool with_empirical = false, std::size_t jobs = 1,
                            const ApproxOptions& opts = {});

// Geometric grid with the log-spacing halved: one midpoint between each
// pair of neighbours.
std::vector<double> refine_geometric_grid(const std::vector<double>& grid);

}  // namespace svmrates
