#pragma once

// Synthetic binary classification problems on the closed unit ball X of R^d
// (X = [-1, 1] for d = 1) with analytic conditional probability
// eta(x) = P(y = +1 | x), marginal density, and distance-to-boundary oracle
//
//   tau(x) = dist(x, X_0 ∪ X_{-1})  for x in X_1 = {eta > 1/2},
//            dist(x, X_0 ∪ X_1)     for x in X_{-1} = {eta < 1/2},
//            0                      on X_0 = {eta = 1/2}.
//
// Population risks are integrals against the marginal P_X: adaptive Simpson
// in quantile space for d = 1, stratified Monte Carlo for d >= 2.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "svmrates/numeric.hpp"

namespace svmrates {

using PointMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Exponents the family is constructed to have. Infinite values use
// kInfinity; the envelope is absent for noise-free families.
struct KnownExponents {
  double q = 0.0;
  double tsybakov_constant = 1.0;
  std::optional<double> envelope_order;
  std::optional<double> envelope_constant;
  double alpha = 0.0;
  // C with  ∫ |2η-1| exp(-τ²/t) dP_X <= C t^{αd/2}  for all t > 0.
  std::optional<double> geometric_constant;
};

enum class Family { power_margin, weighted_power_margin, separated };

struct FamilyParameters {
  Family family = Family::power_margin;
  double gamma = 1.0;
  double q = 1.0;
  double delta = 0.5;
  std::size_t dim = 1;
};

class TrainingSet {
 public:
  TrainingSet(PointMatrix points, std::vector<int> labels, std::uint64_t seed,
              std::string provenance = {});

  std::size_t size() const noexcept { return labels_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(points_.cols()); }
  std::span<const double> point(std::size_t i) const noexcept {
    return {points_.row(static_cast<Eigen::Index>(i)).data(), dim()};
  }
  int label(std::size_t i) const noexcept { return labels_[i]; }
  const PointMatrix& points() const noexcept { return points_; }
  const std::vector<int>& labels() const noexcept { return labels_; }
  std::uint64_t seed() const noexcept { return seed_; }
  const std::string& provenance() const noexcept { return provenance_; }

  bool operator==(const TrainingSet&) const = default;

 private:
  PointMatrix points_;
  std::vector<int> labels_;
  std::uint64_t seed_;
  std::string provenance_;
};

struct IntegrationOptions {
  double abs_tol = 1e-8;
  std::size_t crossing_grid = 4096;
  std::size_t mc_strata_per_axis = 128;
  std::size_t mc_draws_per_stratum = 2;
  std::uint64_t mc_seed = 0x5eed;
};

class SyntheticDistribution {
 public:
  // d = 1, P_X uniform on [-1, 1], eta(x) = (1 + sign(x)|x|^gamma)/2.
  static SyntheticDistribution power_margin(double gamma);
  // d = 1, same eta, density (gamma q / 2)|x|^(gamma q - 1).
  static SyntheticDistribution weighted_power_margin(double gamma, double q);
  // Noise-free: eta = 1 on {x_0 >= 0}, 0 elsewhere; P_X uniform on the ball
  // minus the slab |x_0| < delta/2, so the classes sit at distance delta.
  static SyntheticDistribution separated(double delta, std::size_t dim);

  const FamilyParameters& parameters() const noexcept { return params_; }
  std::size_t dim() const noexcept { return params_.dim; }
  // "family=<name> key=value ..." with locale-independent numbers.
  std::string description() const;
  const std::optional<KnownExponents>& known_exponents() const noexcept { return known_; }

  double eta(std::span<const double> x) const;
  double marginal_density(std::span<const double> x) const;
  double tau(std::span<const double> x) const;
  bool in_domain(std::span<const double> x) const;

  // Radial extension of eta to 3X: eta(x) inside X, eta(x/|x|) for
  // 1 < |x| <= 3, and 1/2 (the neutral value) beyond.
  double extended_eta(std::span<const double> y) const;

  // Coordinates along axis 0 where the sign of extended_eta - 1/2 changes.
  std::span<const double> extended_sign_breaks() const noexcept { return sign_breaks_; }

  // Volume of X.
  double domain_volume() const;

  void draw_point(RandomStream& rng, std::span<double> out) const;

  // d = 1 only: support pieces, distribution function, quantile function and
  // the points where eta, tau or the density change analytic form.
  const std::vector<std::pair<double, double>>& support_intervals() const noexcept {
    return support_;
  }
  double cdf(double x) const;
  double quantile(double u) const;
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

  // E_{P_X} h. For d = 1 the caller may pass extra x-breakpoints where h
  // jumps or kinks; they are mapped through the cdf.
  Estimate expectation(const FieldFunction& h,
                       std::span<const double> extra_breakpoints = {},
                       const IntegrationOptions& opts = {}) const;

 private:
  SyntheticDistribution() = default;

  FamilyParameters params_;
  std::optional<KnownExponents> known_;
  std::vector<std::pair<double, double>> support_;
  std::vector<double> breakpoints_;
  std::vector<double> sign_breaks_;
  double normalizer_ = 1.0;
};

TrainingSet sample(const SyntheticDistribution& dist, std::size_t n, std::uint64_t seed);

// R_P(f) with sign(0) := +1.
Estimate classification_risk(const SyntheticDistribution& dist, const FieldFunction& f,
                             const IntegrationOptions& opts = {});
Estimate bayes_risk(const SyntheticDistribution& dist, const IntegrationOptions& opts = {});
// R_P(f) - R_P, clamped below at -tolerance.
Estimate excess_risk(const SyntheticDistribution& dist, const FieldFunction& f,
                     const IntegrationOptions& opts = {});

Estimate hinge_risk(const SyntheticDistribution& dist, const FieldFunction& f,
                    const IntegrationOptions& opts = {});
// 1 - ∫|2η-1| dP_X, attained by sign(2η - 1).
Estimate hinge_risk_min(const SyntheticDistribution& dist, const IntegrationOptions& opts = {});

struct ExcessHingeRisk {
  Estimate direct;
  // ∫ |2η-1| |f - f_P| dP_X; only for f mapping into [-1, 1].
  std::optional<Estimate> zhang;
};

// Direct excess hinge risk. With `zhang_route` the identity value is
// computed as well, which requires sup|f| <= 1 + 1e-9 on the support.
ExcessHingeRisk excess_hinge_risk(const SyntheticDistribution& dist, const FieldFunction& f,
                                  bool zhang_route = false,
                                  const IntegrationOptions& opts = {});

// Sign convention shared by every risk: sign(0) = +1.
inline double sign_of(double v) noexcept { return v >= 0.0 ? 1.0 : -1.0; }

// The Bayes decision function sign(2η - 1) of `dist`.
FieldFunction bayes_decision(const SyntheticDistribution& dist);

// x-breakpoints of a decision function on the d = 1 support: crossings of
// the given levels. Also reports max |f| over the scan grid.
std::vector<double> decision_breakpoints(const SyntheticDistribution& dist,
                                         const FieldFunction& f,
                                         std::span<const double> levels,
                                         std::size_t grid, double* sup_abs = nullptr);

}  // namespace svmrates
