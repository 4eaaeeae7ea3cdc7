#pragma once

// Noise functionals of a synthetic distribution and power-law fits:
//
//   margin mass       P_X(|2η-1| <= t)                ~ C t^q
//   geometric integral ∫ |2η-1| exp(-τ²/t) dP_X      ~ C t^{αd/2}
//   envelope          |2η-1| <= c_γ τ^γ
//
// Infinite exponents are returned as kInfinity.

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "svmrates/distributions.hpp"
#include "svmrates/stats.hpp"

namespace svmrates {

Estimate margin_mass(const SyntheticDistribution& dist, double t,
                     const IntegrationOptions& opts = {});

Estimate geometric_integral(const SyntheticDistribution& dist, double t,
                            const IntegrationOptions& opts = {});

struct TsybakovFit {
  double q_hat = 0.0;
  double c_hat = 0.0;
  stats::LinearFit fit;
  std::vector<double> t_grid;
  std::vector<double> masses;
};

// Needs >= 5 increasing points in (0, 1). Zero masses are dropped; when all
// vanish q_hat = ∞ and c_hat = 0.
TsybakovFit fit_tsybakov(const SyntheticDistribution& dist, const std::vector<double>& t_grid,
                         const IntegrationOptions& opts = {});

struct GeometricFit {
  double alpha_hat = 0.0;
  // Prefactor exp(intercept); 0 when alpha_hat is infinite.
  double c_hat = 0.0;
  stats::LinearFit fit;
  std::vector<double> t_grid;
  std::vector<double> integrals;
};

// alpha_hat = 2 · slope / d; slopes giving alpha_hat above
// `infinite_threshold` are reported as ∞. Needs >= 3 positive integrals.
GeometricFit fit_geometric(const SyntheticDistribution& dist, const std::vector<double>& t_grid,
                           double infinite_threshold = 10.0,
                           const IntegrationOptions& opts = {});

struct EnvelopeEstimate {
  double c_gamma_hat = 0.0;
  std::size_t points = 0;
};

// max |2η-1| / τ^γ over a dense grid (d = 1) or seeded random points
// (d >= 2), skipping τ < exclusion.
EnvelopeEstimate envelope_constant(const SyntheticDistribution& dist, double gamma,
                                   std::size_t grid = 20001, double exclusion = 1e-4);

// OLS slope of log |2η-1| on log τ over the same kind of grid.
stats::LinearFit fit_envelope_order(const SyntheticDistribution& dist, std::size_t grid = 2001,
                                    double exclusion = 1e-4);

struct PredictedAlpha {
  double alpha = 0.0;
  // For q < 1 only exponents strictly below the value are guaranteed.
  bool open_range = false;
};

PredictedAlpha predicted_geometric_exponent(double q, double gamma, std::size_t d);

// Weak-L_q quasi-norm of 1/|2η-1| under P_X, sup_t t^{-1} mass(t)^{1/q}
// over a t-grid in (0, 1]; for q = ∞ the essential supremum 1/inf{t : mass(t) > 0}.
double inverse_margin_norm_grid(const SyntheticDistribution& dist, double q,
                                const std::vector<double>& t_grid,
                                const IntegrationOptions& opts = {});

// Closed form when the family's margin mass is exactly t^q (every built-in
// family at its own q): the norm is 1. Falls back to the grid otherwise.
double inverse_margin_norm(const SyntheticDistribution& dist, double q,
                           const IntegrationOptions& opts = {});

struct TauNormCheck {
  bool finite = false;
  // Truncated value (∫_{τ >= ε} τ^{-p} |2η-1| dP_X)^{1/p} at the smallest ε.
  double value = 0.0;
  // Slope of log(increment) against log(ε); positive for a convergent tail.
  double tail_slope = 0.0;
};

// Finiteness of ‖1/τ‖ in L_p(|2η-1| dP_X) by truncation at ε = 10^{-2..-8}.
TauNormCheck inverse_tau_norm(const SyntheticDistribution& dist, double p,
                              const IntegrationOptions& opts = {});

struct NoiseReport {
  std::string distribution;
  TsybakovFit tsybakov;
  GeometricFit geometric;
  std::optional<double> gamma_hat;
  std::optional<double> gamma_r_squared;
  std::optional<double> c_gamma_hat;
  std::optional<PredictedAlpha> predicted_alpha;
};

struct NoiseOptions {
  std::vector<double> tsybakov_grid = stats::log_space(1e-3, 0.5, 10);
  std::vector<double> geometric_grid = stats::log_space(1e-4, 1e-2, 9);
  double infinite_threshold = 10.0;
  IntegrationOptions integration{};
};

NoiseReport analyze_noise(const SyntheticDistribution& dist, const NoiseOptions& opts = {});

// key = value lines, in a fixed order.
std::vector<std::pair<std::string, std::string>> report_fields(const NoiseReport& report);

}  // namespace svmrates
