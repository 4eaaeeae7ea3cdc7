#include "svmrates/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "svmrates/format.hpp"

namespace svmrates {
namespace {

// Expectation with the tolerance tightened to a relative 1e-7 when the
// first pass shows the value is tiny.
Estimate precise_expectation(const SyntheticDistribution& dist, const FieldFunction& h,
                             std::span<const double> cuts, const IntegrationOptions& opts) {
  Estimate e = dist.expectation(h, cuts, opts);
  if (e.monte_carlo || std::abs(e.value) >= 1e3 * opts.abs_tol) return e;
  IntegrationOptions fine = opts;
  fine.abs_tol = std::max(std::abs(e.value) * 1e-7, 1e-300);
  if (fine.abs_tol >= opts.abs_tol) return e;
  return dist.expectation(h, cuts, fine);
}

// Crossings of g with `levels` on the d = 1 support. The scan uses a
// uniform grid plus geometric clusters around the family's breakpoints,
// where the noise functionals vary on every scale.
std::vector<double> scan_crossings(const SyntheticDistribution& dist, const ScalarFunction& g,
                                   std::span<const double> levels, std::size_t grid = 4096) {
  std::vector<double> out;
  for (const auto& [a, b] : dist.support_intervals()) {
    std::vector<double> nodes;
    for (std::size_t k = 0; k <= grid; ++k) {
      nodes.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(grid));
    }
    for (double c : dist.breakpoints()) {
      for (int j = 4; j <= 60; ++j) {
        const double r = std::pow(10.0, -0.25 * j);
        for (double x : {c - r, c + r}) {
          if (x > a && x < b) nodes.push_back(x);
        }
      }
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    std::vector<double> values(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) values[k] = g(nodes[k]);
    for (double level : levels) {
      for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        const double lo_v = values[k] - level, hi_v = values[k + 1] - level;
        if ((lo_v < 0.0) == (hi_v < 0.0)) continue;
        double lo = nodes[k], hi = nodes[k + 1];
        for (int it = 0; it < 100 && hi - lo > 0.0; ++it) {
          const double mid = 0.5 * (lo + hi);
          if (mid <= lo || mid >= hi) break;
          if ((g(mid) - level < 0.0) == (lo_v < 0.0)) {
            lo = mid;
          } else {
            hi = mid;
          }
        }
        out.push_back(0.5 * (lo + hi));
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double noise_level(const SyntheticDistribution& dist, std::span<const double> x) {
  return std::abs(2.0 * dist.eta(x) - 1.0);
}

void require_grid(const std::vector<double>& t, std::size_t min_points, const char* who) {
  if (t.size() < min_points) {
    throw std::invalid_argument(std::string(who) + ": grid needs at least " +
                                std::to_string(min_points) + " points");
  }
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0) || !std::isfinite(t[i]) || (i > 0 && !(t[i] > t[i - 1]))) {
      throw std::invalid_argument(std::string(who) +
                                  ": grid must be positive and strictly increasing");
    }
  }
}

std::vector<double> support_grid(const SyntheticDistribution& dist, std::size_t grid) {
  std::vector<double> xs;
  for (const auto& [a, b] : dist.support_intervals()) {
    for (std::size_t k = 0; k <= grid; ++k) {
      xs.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(grid));
    }
  }
  return xs;
}

// Points for pointwise scans: a grid in d = 1, seeded draws otherwise.
std::vector<std::vector<double>> scan_points(const SyntheticDistribution& dist,
                                             std::size_t count) {
  std::vector<std::vector<double>> pts;
  if (dist.dim() == 1) {
    for (double x : support_grid(dist, count)) pts.push_back({x});
    return pts;
  }
  RandomStream rng(0xe7e10fe);
  pts.assign(count, std::vector<double>(dist.dim()));
  for (auto& p : pts) dist.draw_point(rng, p);
  return pts;
}

}  // namespace

Estimate margin_mass(const SyntheticDistribution& dist, double t,
                     const IntegrationOptions& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("margin_mass: t must be positive");
  if (t >= 1.0) return Estimate{1.0, 0.0, dist.dim() > 1, true};
  const FieldFunction h = [&](std::span<const double> x) {
    return noise_level(dist, x) <= t ? 1.0 : 0.0;
  };
  std::vector<double> cuts;
  if (dist.dim() == 1) {
    const double level[] = {t};
    cuts = scan_crossings(
        dist, [&](double x) { return noise_level(dist, std::span<const double>(&x, 1)); }, level);
  }
  return precise_expectation(dist, h, cuts, opts);
}

Estimate geometric_integral(const SyntheticDistribution& dist, double t,
                            const IntegrationOptions& opts) {
  if (!(t > 0.0)) throw std::invalid_argument("geometric_integral: t must be positive");
  const FieldFunction h = [&](std::span<const double> x) {
    const double tau = dist.tau(x);
    return noise_level(dist, x) * std::exp(-tau * tau / t);
  };
  // The mass sits within a few sqrt(t) of the boundary; cutting there keeps
  // the quadrature from stepping over it.
  std::vector<double> cuts;
  if (dist.dim() == 1) {
    std::vector<double> levels;
    for (double k : {0.25, 0.5, 1.0, 2.0, 4.0, 8.0}) levels.push_back(k * std::sqrt(t));
    cuts = scan_crossings(
        dist, [&](double x) { return dist.tau(std::span<const double>(&x, 1)); }, levels);
  }
  return precise_expectation(dist, h, cuts, opts);
}

TsybakovFit fit_tsybakov(const SyntheticDistribution& dist, const std::vector<double>& t_grid,
                         const IntegrationOptions& opts) {
  require_grid(t_grid, 5, "fit_tsybakov");
  if (t_grid.back() >= 1.0) throw std::invalid_argument("fit_tsybakov: grid must lie in (0, 1)");
  TsybakovFit out;
  out.t_grid = t_grid;
  for (double t : t_grid) out.masses.push_back(margin_mass(dist, t, opts).value);
  const auto positive = std::count_if(out.masses.begin(), out.masses.end(),
                                      [](double m) { return m > 0.0; });
  if (positive == 0) {
    out.q_hat = kInfinity;
    out.c_hat = 0.0;
    return out;
  }
  if (positive < 2) {
    throw std::invalid_argument("fit_tsybakov: fewer than two positive masses on the grid");
  }
  out.fit = stats::log_log_fit(out.t_grid, out.masses);
  out.q_hat = std::max(0.0, out.fit.slope);
  out.c_hat = std::exp(out.fit.intercept);
  return out;
}

GeometricFit fit_geometric(const SyntheticDistribution& dist, const std::vector<double>& t_grid,
                           double infinite_threshold, const IntegrationOptions& opts) {
  require_grid(t_grid, 3, "fit_geometric");
  GeometricFit out;
  out.t_grid = t_grid;
  for (double t : t_grid) out.integrals.push_back(geometric_integral(dist, t, opts).value);
  const auto positive = std::count_if(out.integrals.begin(), out.integrals.end(),
                                      [](double v) { return v > 0.0; });
  if (positive < 3) {
    throw std::invalid_argument("fit_geometric: fewer than three positive integrals");
  }
  out.fit = stats::log_log_fit(out.t_grid, out.integrals);
  const double alpha = 2.0 * out.fit.slope / static_cast<double>(dist.dim());
  if (alpha > infinite_threshold) {
    out.alpha_hat = kInfinity;
    out.c_hat = 0.0;
  } else {
    out.alpha_hat = std::max(0.0, alpha);
    out.c_hat = std::exp(out.fit.intercept);
  }
  return out;
}

EnvelopeEstimate envelope_constant(const SyntheticDistribution& dist, double gamma,
                                   std::size_t grid, double exclusion) {
  if (!(gamma > 0.0)) throw std::invalid_argument("envelope_constant: gamma must be positive");
  EnvelopeEstimate out;
  for (const auto& p : scan_points(dist, grid)) {
    const double tau = dist.tau(p);
    if (tau < exclusion) continue;
    out.c_gamma_hat = std::max(out.c_gamma_hat, noise_level(dist, p) / std::pow(tau, gamma));
    ++out.points;
  }
  return out;
}

stats::LinearFit fit_envelope_order(const SyntheticDistribution& dist, std::size_t grid,
                                    double exclusion) {
  std::vector<double> taus, levels;
  for (const auto& p : scan_points(dist, grid)) {
    const double tau = dist.tau(p);
    if (tau < exclusion) continue;
    taus.push_back(tau);
    levels.push_back(noise_level(dist, p));
  }
  return stats::log_log_fit(taus, levels);
}

PredictedAlpha predicted_geometric_exponent(double q, double gamma, std::size_t d) {
  if (!(q >= 0.0) || !(gamma > 0.0) || d == 0) {
    throw std::invalid_argument("predicted_geometric_exponent: need q >= 0, gamma > 0, d >= 1");
  }
  return PredictedAlpha{(q + 1.0) * gamma / static_cast<double>(d), q < 1.0};
}

double inverse_margin_norm_grid(const SyntheticDistribution& dist, double q,
                                const std::vector<double>& t_grid,
                                const IntegrationOptions& opts) {
  if (!(q > 0.0)) throw std::invalid_argument("inverse_margin_norm_grid: q must be positive");
  require_grid(t_grid, 2, "inverse_margin_norm_grid");
  std::vector<double> grid = t_grid;
  if (grid.back() < 1.0) grid.push_back(1.0);
  if (std::isinf(q)) {
    for (double t : grid) {
      if (margin_mass(dist, t, opts).value > 0.0) return 1.0 / t;
    }
    return 1.0;
  }
  double best = 0.0;
  for (double t : grid) {
    if (t > 1.0) break;
    best = std::max(best, std::pow(margin_mass(dist, t, opts).value, 1.0 / q) / t);
  }
  return best;
}

double inverse_margin_norm(const SyntheticDistribution& dist, double q,
                           const IntegrationOptions& opts) {
  const auto& known = dist.known_exponents();
  if (known && (known->q == q || (std::isinf(q) && std::isinf(known->q))) &&
      known->tsybakov_constant == 1.0) {
    return 1.0;
  }
  return inverse_margin_norm_grid(dist, q, stats::log_space(1e-4, 1.0, 41), opts);
}

TauNormCheck inverse_tau_norm(const SyntheticDistribution& dist, double p,
                              const IntegrationOptions& opts) {
  if (dist.dim() != 1) throw std::invalid_argument("inverse_tau_norm: d = 1 only");
  if (!(p > 0.0)) throw std::invalid_argument("inverse_tau_norm: p must be positive");
  const ScalarFunction tau_1d = [&](double x) { return dist.tau(std::span<const double>(&x, 1)); };
  const auto piece = [&](double lo, double hi) {
    const double levels[] = {lo, hi};
    const auto cuts = scan_crossings(dist, tau_1d, levels);
    return precise_expectation(
               dist,
               [&](std::span<const double> x) {
                 const double tau = dist.tau(x);
                 if (tau < lo || tau >= hi) return 0.0;
                 return std::pow(tau, -p) * noise_level(dist, x);
               },
               cuts, opts)
        .value;
  };
  double total = piece(1e-2, kInfinity);
  std::vector<double> eps, increments;
  for (int k = 2; k < 8; ++k) {
    const double hi = std::pow(10.0, -k), lo = hi / 10.0;
    const double inc = piece(lo, hi);
    total += inc;
    eps.push_back(lo);
    increments.push_back(inc);
  }
  TauNormCheck out;
  out.value = std::pow(total, 1.0 / p);
  const auto positive = std::count_if(increments.begin(), increments.end(),
                                      [](double v) { return v > 0.0; });
  if (positive < 2) {
    out.finite = true;
    out.tail_slope = kInfinity;
    return out;
  }
  out.tail_slope = stats::log_log_fit(eps, increments).slope;
  out.finite = out.tail_slope > 0.05;
  return out;
}

NoiseReport analyze_noise(const SyntheticDistribution& dist, const NoiseOptions& opts) {
  NoiseReport r;
  r.distribution = dist.description();
  r.tsybakov = fit_tsybakov(dist, opts.tsybakov_grid, opts.integration);
  r.geometric = fit_geometric(dist, opts.geometric_grid, opts.infinite_threshold, opts.integration);
  const auto order = fit_envelope_order(dist);
  if (order.points >= 2 && order.slope > 1e-9) {
    r.gamma_hat = order.slope;
    r.gamma_r_squared = order.r_squared;
  }
  const auto& known = dist.known_exponents();
  std::optional<double> gamma = known && known->envelope_order ? known->envelope_order : r.gamma_hat;
  if (gamma) {
    r.c_gamma_hat = envelope_constant(dist, *gamma).c_gamma_hat;
    if (std::isfinite(r.tsybakov.q_hat)) {
      r.predicted_alpha = predicted_geometric_exponent(r.tsybakov.q_hat, *gamma, dist.dim());
    }
  }
  return r;
}

std::vector<std::pair<std::string, std::string>> report_fields(const NoiseReport& r) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? format_number(*v) : std::string("na");
  };
  std::vector<std::pair<std::string, std::string>> out{
      {"distribution", r.distribution},
      {"q_hat", format_number(r.tsybakov.q_hat)},
      {"c_hat", format_number(r.tsybakov.c_hat)},
      {"q_r_squared", format_number(r.tsybakov.fit.r_squared)},
      {"q_points", std::to_string(r.tsybakov.fit.points)},
      {"q_t_min", format_number(r.tsybakov.t_grid.front())},
      {"q_t_max", format_number(r.tsybakov.t_grid.back())},
      {"alpha_hat", format_number(r.geometric.alpha_hat)},
      {"alpha_c_hat", format_number(r.geometric.c_hat)},
      {"alpha_r_squared", format_number(r.geometric.fit.r_squared)},
      {"alpha_points", std::to_string(r.geometric.fit.points)},
      {"alpha_t_min", format_number(r.geometric.t_grid.front())},
      {"alpha_t_max", format_number(r.geometric.t_grid.back())},
      {"gamma_hat", opt(r.gamma_hat)},
      {"gamma_r_squared", opt(r.gamma_r_squared)},
      {"c_gamma_hat", opt(r.c_gamma_hat)},
      {"predicted_alpha",
       r.predicted_alpha ? format_number(r.predicted_alpha->alpha) : std::string("na")},
      {"predicted_alpha_open_range",
       r.predicted_alpha ? (r.predicted_alpha->open_range ? "true" : "false") : "na"},
  };
  return out;
}

}  // namespace svmrates
