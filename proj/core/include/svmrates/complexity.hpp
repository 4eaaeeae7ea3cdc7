#pragma once

// Covering numbers of the unit ball of H_σ in the empirical norm L2(T_X).
// Evaluated at the sample, the ball is the ellipsoid {K^{1/2}u : |u| <= 1}
// scaled by n^{-1/2}; its semi-axes are sqrt(μ_i / n) for the Gram
// eigenvalues μ_i.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "svmrates/distributions.hpp"
#include "svmrates/kernel.hpp"
#include "svmrates/numeric.hpp"

namespace svmrates {

struct CoverProfile {
  std::vector<double> semi_axes;  // nonincreasing
  std::size_t n = 0;
  double sigma = 0.0;
};

// Eigenvalues down to -1e-8·n are clamped to 0; anything more negative
// throws.
CoverProfile cover_profile(const PointMatrix& points, double sigma);

struct CoverBounds {
  double lower = 0.0;
  double upper = 0.0;
};

// ln N bounds at radius ε ∈ (0, 1]:
//   lower = Σ_{a_i > ε} ln(a_i / ε)
//   upper = Σ_{a_i > ε/2} ln(1 + 4 a_i / ε)
CoverBounds log_cover_bounds(const CoverProfile& profile, double epsilon);

struct CoverRow {
  double sigma = 0.0;
  double epsilon = 0.0;
  std::size_t n = 0;
  double lower = 0.0;
  double upper = 0.0;
};

struct ScalingReport {
  std::vector<CoverRow> rows;  // σ-major order
  std::vector<double> sigma_grid;
  std::vector<double> epsilon_grid;
  // Slope of log(upper) against log(1/ε), one per σ.
  std::vector<double> epsilon_slopes;
  // Slope of log(upper) against log σ, one per ε.
  std::vector<double> sigma_slopes;
  // Local slopes by central differences in each interior grid cell, and
  // their Spearman correlation.
  std::vector<double> local_epsilon_slopes;
  std::vector<double> local_sigma_slopes;
  double rank_correlation = 0.0;
};

ScalingReport cover_scaling_scan(const PointMatrix& points, const std::vector<double>& sigma_grid,
                                 const std::vector<double>& epsilon_grid, std::size_t jobs = 1);

// (1/n) sqrt(sᵀKs): the supremum over the unit ball of |(1/n) Σ s_i f(x_i)|.
double rademacher_exact(const PointMatrix& points, double sigma, std::span<const int> signs);

// Mean of rademacher_exact over `trials` seeded sign draws, with its
// standard error.
Estimate rademacher_average(const PointMatrix& points, double sigma, std::size_t trials,
                            std::uint64_t seed);

}  // namespace svmrates
