#include "svmrates/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "svmrates/format.hpp"

namespace svmrates {
namespace {

double norm2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

double unit_ball_volume(std::size_t d) {
  const double k = static_cast<double>(d);
  return std::pow(std::numbers::pi, 0.5 * k) / std::tgamma(0.5 * k + 1.0);
}

// Power-margin conditional probability, shared by both power families.
double power_eta(double x, double gamma) {
  const double m = std::pow(std::abs(x), gamma);
  return 0.5 * (1.0 + (x >= 0.0 ? m : -m));
}

}  // namespace

TrainingSet::TrainingSet(PointMatrix points, std::vector<int> labels, std::uint64_t seed,
                         std::string provenance)
    : points_(std::move(points)),
      labels_(std::move(labels)),
      seed_(seed),
      provenance_(std::move(provenance)) {
  if (labels_.empty()) throw std::invalid_argument("TrainingSet: empty");
  if (static_cast<std::size_t>(points_.rows()) != labels_.size()) {
    throw std::invalid_argument("TrainingSet: point/label count mismatch");
  }
  for (int y : labels_) {
    if (y != 1 && y != -1) throw std::invalid_argument("TrainingSet: labels must be +1 or -1");
  }
}

SyntheticDistribution SyntheticDistribution::power_margin(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("power_margin: gamma must be positive");
  }
  SyntheticDistribution d;
  d.params_ = FamilyParameters{Family::power_margin, gamma, 1.0 / gamma, 0.0, 1};
  KnownExponents k;
  k.q = 1.0 / gamma;
  k.tsybakov_constant = 1.0;
  k.envelope_order = gamma;
  k.envelope_constant = 1.0;
  k.alpha = 1.0 + gamma;
  // ∫_0^1 x^γ e^{-x²/t} dx <= Γ((γ+1)/2)/2 · t^{(γ+1)/2}
  k.geometric_constant = 0.5 * std::tgamma(0.5 * (gamma + 1.0));
  d.known_ = k;
  d.support_ = {{-1.0, 1.0}};
  d.breakpoints_ = {0.0};
  d.sign_breaks_ = {0.0};
  d.normalizer_ = 0.5;
  return d;
}

SyntheticDistribution SyntheticDistribution::weighted_power_margin(double gamma, double q) {
  if (!(gamma > 0.0) || !(q > 0.0) || !std::isfinite(gamma) || !std::isfinite(q)) {
    throw std::invalid_argument(
        "weighted_power_margin: gamma and q must be positive (density |x|^(gamma q - 1) "
        "is not integrable otherwise)");
  }
  SyntheticDistribution d;
  d.params_ = FamilyParameters{Family::weighted_power_margin, gamma, q, 0.0, 1};
  const double kappa = gamma * q;
  KnownExponents k;
  k.q = q;
  k.tsybakov_constant = 1.0;
  k.envelope_order = gamma;
  k.envelope_constant = 1.0;
  k.alpha = (q + 1.0) * gamma;
  k.geometric_constant = 0.5 * kappa * std::tgamma(0.5 * (gamma + kappa));
  d.known_ = k;
  d.support_ = {{-1.0, 1.0}};
  d.breakpoints_ = {0.0};
  d.sign_breaks_ = {0.0};
  d.normalizer_ = 0.5 * kappa;
  return d;
}

SyntheticDistribution SyntheticDistribution::separated(double delta, std::size_t dim) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("separated: delta must lie in (0, 1)");
  }
  if (dim == 0) throw std::invalid_argument("separated: dimension must be >= 1");
  SyntheticDistribution d;
  d.params_ = FamilyParameters{Family::separated, 0.0, kInfinity, delta, dim};
  KnownExponents k;
  k.q = kInfinity;
  k.tsybakov_constant = 1.0;
  k.alpha = kInfinity;
  d.known_ = k;
  const double h = 0.5 * delta;
  d.sign_breaks_ = {0.0};
  if (dim == 1) {
    d.support_ = {{-1.0, -h}, {h, 1.0}};
    d.breakpoints_ = {-h, 0.0, h};
    d.normalizer_ = 1.0 / (2.0 * (1.0 - h));
  } else {
    // Lebesgue measure of {|x| <= 1, |x_0| >= h}: ball minus slab.
    const double k1 = static_cast<double>(dim - 1);
    const double slice = unit_ball_volume(dim - 1);
    const Estimate slab = quad::adaptive_simpson(
        [&](double s) { return slice * std::pow(std::max(0.0, 1.0 - s * s), 0.5 * k1); }, -h, h,
        quad::SimpsonOptions{1e-14, 6, 48});
    d.normalizer_ = 1.0 / (unit_ball_volume(dim) - slab.value);
  }
  return d;
}

std::string SyntheticDistribution::description() const {
  switch (params_.family) {
    case Family::power_margin:
      return "family=power_margin gamma=" + format_number(params_.gamma);
    case Family::weighted_power_margin:
      return "family=weighted_power_margin gamma=" + format_number(params_.gamma) +
             " q=" + format_number(params_.q);
    case Family::separated:
      return "family=separated delta=" + format_number(params_.delta) +
             " d=" + std::to_string(params_.dim);
  }
  return {};
}

bool SyntheticDistribution::in_domain(std::span<const double> x) const {
  if (x.size() != params_.dim) return false;
  return norm2(x) <= 1.0 + 1e-15;
}

double SyntheticDistribution::eta(std::span<const double> x) const {
  switch (params_.family) {
    case Family::power_margin:
    case Family::weighted_power_margin:
      return power_eta(x[0], params_.gamma);
    case Family::separated:
      return x[0] >= 0.0 ? 1.0 : 0.0;
  }
  return 0.5;
}

double SyntheticDistribution::marginal_density(std::span<const double> x) const {
  if (!in_domain(x)) return 0.0;
  switch (params_.family) {
    case Family::power_margin:
      return normalizer_;
    case Family::weighted_power_margin: {
      const double kappa = params_.gamma * params_.q;
      const double ax = std::abs(x[0]);
      if (ax == 0.0) return kappa < 1.0 ? kInfinity : (kappa == 1.0 ? normalizer_ : 0.0);
      return normalizer_ * std::pow(ax, kappa - 1.0);
    }
    case Family::separated:
      return std::abs(x[0]) >= 0.5 * params_.delta ? normalizer_ : 0.0;
  }
  return 0.0;
}

double SyntheticDistribution::tau(std::span<const double> x) const {
  // Every built-in family has decision boundary {x_0 = 0} inside X.
  switch (params_.family) {
    case Family::power_margin:
    case Family::weighted_power_margin:
    case Family::separated:
      return std::abs(x[0]);
  }
  return 0.0;
}

double SyntheticDistribution::extended_eta(std::span<const double> y) const {
  const double r = norm2(y);
  if (r <= 1.0) return eta(y);
  if (r > 3.0) return 0.5;
  if (y.size() <= 4) {
    std::array<double, 4> unit{};
    for (std::size_t k = 0; k < y.size(); ++k) unit[k] = y[k] / r;
    return eta(std::span<const double>(unit.data(), y.size()));
  }
  std::vector<double> unit(y.begin(), y.end());
  for (double& v : unit) v /= r;
  return eta(unit);
}

double SyntheticDistribution::domain_volume() const { return unit_ball_volume(params_.dim); }

void SyntheticDistribution::draw_point(RandomStream& rng, std::span<double> out) const {
  if (out.size() != params_.dim) throw std::invalid_argument("draw_point: dimension mismatch");
  if (params_.dim == 1) {
    out[0] = quantile(rng.uniform());
    return;
  }
  const double h = 0.5 * params_.delta;
  for (;;) {
    double r2 = 0.0;
    for (double& v : out) {
      v = rng.normal();
      r2 += v * v;
    }
    const double radius = std::pow(rng.uniform(), 1.0 / static_cast<double>(params_.dim));
    const double scale = radius / std::sqrt(r2);
    for (double& v : out) v *= scale;
    if (params_.family != Family::separated || std::abs(out[0]) >= h) return;
  }
}

double SyntheticDistribution::cdf(double x) const {
  if (params_.dim != 1) throw std::logic_error("cdf: only defined for d = 1");
  if (x <= -1.0) return 0.0;
  if (x >= 1.0) return 1.0;
  switch (params_.family) {
    case Family::power_margin:
      return 0.5 * (x + 1.0);
    case Family::weighted_power_margin: {
      const double m = std::pow(std::abs(x), params_.gamma * params_.q);
      return 0.5 + 0.5 * (x >= 0.0 ? m : -m);
    }
    case Family::separated: {
      const double h = 0.5 * params_.delta;
      if (x <= -h) return (x + 1.0) / (2.0 * (1.0 - h));
      if (x < h) return 0.5;
      return 0.5 + (x - h) / (2.0 * (1.0 - h));
    }
  }
  return 0.0;
}

double SyntheticDistribution::quantile(double u) const {
  if (params_.dim != 1) throw std::logic_error("quantile: only defined for d = 1");
  u = std::clamp(u, 0.0, 1.0);
  switch (params_.family) {
    case Family::power_margin:
      return 2.0 * u - 1.0;
    case Family::weighted_power_margin: {
      const double v = 2.0 * u - 1.0;
      const double m = std::pow(std::abs(v), 1.0 / (params_.gamma * params_.q));
      return v >= 0.0 ? m : -m;
    }
    case Family::separated: {
      const double h = 0.5 * params_.delta;
      if (u < 0.5) return -1.0 + 2.0 * u * (1.0 - h);
      return h + (2.0 * u - 1.0) * (1.0 - h);
    }
  }
  return 0.0;
}

Estimate SyntheticDistribution::expectation(const FieldFunction& h,
                                            std::span<const double> extra_breakpoints,
                                            const IntegrationOptions& opts) const {
  if (params_.dim == 1) {
    std::vector<double> cuts;
    cuts.reserve(breakpoints_.size() + extra_breakpoints.size());
    for (double b : breakpoints_) cuts.push_back(cdf(b));
    for (double b : extra_breakpoints) cuts.push_back(cdf(b));
    double x = 0.0;
    const ScalarFunction integrand = [&](double u) {
      x = quantile(u);
      return h(std::span<const double>(&x, 1));
    };
    return quad::adaptive_simpson(integrand, 0.0, 1.0, cuts,
                                  quad::SimpsonOptions{opts.abs_tol, 6, 48});
  }
  const FieldFunction weighted = [&](std::span<const double> x) {
    const double p = marginal_density(x);
    return p > 0.0 ? p * h(x) : 0.0;
  };
  return quad::stratified_monte_carlo(weighted, params_.dim, opts.mc_strata_per_axis,
                                      opts.mc_draws_per_stratum, opts.mc_seed);
}

TrainingSet sample(const SyntheticDistribution& dist, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample: n must be >= 1");
  const std::size_t d = dist.dim();
  PointMatrix points(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<int> labels(n);
  RandomStream rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    std::span<double> row(points.row(static_cast<Eigen::Index>(i)).data(), d);
    dist.draw_point(rng, row);
    labels[i] = rng.uniform() < dist.eta(row) ? 1 : -1;
  }
  return TrainingSet(std::move(points), std::move(labels), seed, dist.description());
}

FieldFunction bayes_decision(const SyntheticDistribution& dist) {
  return [&dist](std::span<const double> x) { return sign_of(2.0 * dist.eta(x) - 1.0); };
}

std::vector<double> decision_breakpoints(const SyntheticDistribution& dist,
                                         const FieldFunction& f,
                                         std::span<const double> levels, std::size_t grid,
                                         double* sup_abs) {
  std::vector<double> out;
  if (sup_abs) *sup_abs = 0.0;
  if (dist.dim() != 1) return out;
  const ScalarFunction g = [&](double x) { return f(std::span<const double>(&x, 1)); };
  double total_length = 0.0;
  for (const auto& [a, b] : dist.support_intervals()) total_length += b - a;
  for (const auto& [a, b] : dist.support_intervals()) {
    const auto cells = std::max<std::size_t>(
        16, static_cast<std::size_t>(static_cast<double>(grid) * (b - a) / total_length));
    double piece_sup = 0.0;
    auto roots = quad::level_crossings(g, a, b, levels, cells, &piece_sup);
    out.insert(out.end(), roots.begin(), roots.end());
    if (sup_abs) *sup_abs = std::max(*sup_abs, piece_sup);
  }
  return out;
}

namespace {

constexpr double kDecisionLevels[] = {0.0};
constexpr double kHingeLevels[] = {-1.0, 0.0, 1.0};

}  // namespace

Estimate classification_risk(const SyntheticDistribution& dist, const FieldFunction& f,
                             const IntegrationOptions& opts) {
  const auto cuts = decision_breakpoints(dist, f, kDecisionLevels, opts.crossing_grid);
  return dist.expectation(
      [&](std::span<const double> x) {
        const double e = dist.eta(x);
        return f(x) >= 0.0 ? 1.0 - e : e;
      },
      cuts, opts);
}

Estimate bayes_risk(const SyntheticDistribution& dist, const IntegrationOptions& opts) {
  return dist.expectation(
      [&](std::span<const double> x) {
        const double e = dist.eta(x);
        return std::min(e, 1.0 - e);
      },
      {}, opts);
}

Estimate excess_risk(const SyntheticDistribution& dist, const FieldFunction& f,
                     const IntegrationOptions& opts) {
  const Estimate r = classification_risk(dist, f, opts);
  const Estimate b = bayes_risk(dist, opts);
  Estimate e;
  e.error = r.monte_carlo ? std::hypot(r.error, b.error) : r.error + b.error;
  e.monte_carlo = r.monte_carlo;
  e.converged = r.converged && b.converged;
  const double floor = -(e.monte_carlo ? 3.0 * e.error : opts.abs_tol);
  e.value = std::max(r.value - b.value, floor);
  return e;
}

namespace {

double hinge(double y, double t) { return std::max(0.0, 1.0 - y * t); }

}  // namespace

Estimate hinge_risk(const SyntheticDistribution& dist, const FieldFunction& f,
                    const IntegrationOptions& opts) {
  const auto cuts = decision_breakpoints(dist, f, kHingeLevels, opts.crossing_grid);
  return dist.expectation(
      [&](std::span<const double> x) {
        const double e = dist.eta(x);
        const double t = f(x);
        return e * hinge(1.0, t) + (1.0 - e) * hinge(-1.0, t);
      },
      cuts, opts);
}

Estimate hinge_risk_min(const SyntheticDistribution& dist, const IntegrationOptions& opts) {
  Estimate m = dist.expectation(
      [&](std::span<const double> x) { return std::abs(2.0 * dist.eta(x) - 1.0); }, {}, opts);
  m.value = 1.0 - m.value;
  return m;
}

ExcessHingeRisk excess_hinge_risk(const SyntheticDistribution& dist, const FieldFunction& f,
                                  bool zhang_route, const IntegrationOptions& opts) {
  double sup_abs = 0.0;
  const auto cuts = decision_breakpoints(dist, f, kHingeLevels, opts.crossing_grid, &sup_abs);
  ExcessHingeRisk out;
  // Pointwise excess: η l(1,f) + (1-η) l(-1,f) - (1 - |2η-1|).
  out.direct = dist.expectation(
      [&](std::span<const double> x) {
        const double e = dist.eta(x);
        const double t = f(x);
        return e * hinge(1.0, t) + (1.0 - e) * hinge(-1.0, t) - (1.0 - std::abs(2.0 * e - 1.0));
      },
      cuts, opts);
  if (zhang_route) {
    if (dist.dim() == 1 && sup_abs > 1.0 + 1e-9) {
      throw std::invalid_argument(
          "excess_hinge_risk: identity route needs f into [-1, 1], sup|f| = " +
          format_number(sup_abs));
    }
    out.zhang = dist.expectation(
        [&](std::span<const double> x) {
          const double e = dist.eta(x);
          return std::abs(2.0 * e - 1.0) * std::abs(f(x) - sign_of(2.0 * e - 1.0));
        },
        cuts, opts);
  }
  return out;
}

}  // namespace svmrates
