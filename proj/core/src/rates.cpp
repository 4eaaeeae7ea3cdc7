#include "svmrates/rates.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>

#include "svmrates/noise.hpp"
#include "svmrates/stats.hpp"

namespace svmrates {
namespace {

double hinge(double y, double t) { return std::max(0.0, 1.0 - y * t); }

// (q+2)/(q+1) and q/(q+1), with their limits at q = ∞.
double outer_exponent(double q) { return std::isinf(q) ? 1.0 : (q + 2.0) / (q + 1.0); }
double inner_exponent(double q) { return std::isinf(q) ? 1.0 : q / (q + 1.0); }

constexpr double kHingeLevels[] = {-1.0, 0.0, 1.0};

}  // namespace

double beta(double q, double alpha) {
  if (!(q >= 0.0)) throw std::invalid_argument("beta: q must be >= 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("beta: alpha must be > 0");
  const bool q_inf = std::isinf(q), a_inf = std::isinf(alpha);
  const double threshold = q == 0.0 ? kInfinity : (q_inf ? 0.5 : (q + 2.0) / (2.0 * q));
  const bool first = a_inf ? q == 0.0 : alpha <= threshold;
  if (first) return a_inf ? 0.5 : alpha / (2.0 * alpha + 1.0);
  if (q_inf && a_inf) return 1.0;
  if (q_inf) return 2.0 * alpha / (2.0 * alpha + 3.0);
  if (a_inf) return (q + 1.0) / (q + 2.0);
  return 2.0 * alpha * (q + 1.0) / (2.0 * alpha * (q + 2.0) + 3.0 * q + 4.0);
}

double RateSchedule::lambda_of_n(std::size_t n) const {
  const double nn = static_cast<double>(n);
  if (fixed_sigma) return std::pow(nn, -beta);
  return std::pow(nn, -beta * (alpha + 1.0) / alpha);
}

double RateSchedule::sigma_of_n(std::size_t n) const {
  if (fixed_sigma) return *fixed_sigma;
  return std::pow(static_cast<double>(n), beta / (alpha * static_cast<double>(d)));
}

RateSchedule make_schedule(double q, double alpha, std::size_t d,
                           std::optional<double> fixed_sigma) {
  if (d == 0) throw std::invalid_argument("make_schedule: d must be >= 1");
  RateSchedule s;
  s.q = q;
  s.alpha = alpha;
  s.d = d;
  s.beta = beta(q, alpha);
  if (std::isinf(alpha)) {
    const double floor = 2.0 * std::sqrt(static_cast<double>(d));
    s.fixed_sigma = fixed_sigma.value_or(floor + 1.0);
    if (!(*s.fixed_sigma > floor)) {
      throw std::invalid_argument("make_schedule: the constant sigma must exceed 2 sqrt(d)");
    }
  }
  return s;
}

std::uint64_t row_seed(std::uint64_t base_seed, std::size_t n, std::size_t trial) {
  return derive_seed(base_seed, {static_cast<std::uint64_t>(n), static_cast<std::uint64_t>(trial)});
}

ExperimentReport run_experiment(const SyntheticDistribution& dist, const RateSchedule& schedule,
                                const std::vector<std::size_t>& n_grid, std::size_t trials,
                                std::uint64_t base_seed, const ExperimentOptions& opts) {
  if (n_grid.empty() || trials == 0) {
    throw std::invalid_argument("run_experiment: empty n grid or zero trials");
  }
  for (std::size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] == 0 || (i > 0 && n_grid[i] <= n_grid[i - 1])) {
      throw std::invalid_argument("run_experiment: n grid must be positive and increasing");
    }
  }
  ExperimentReport report;
  report.distribution = dist.description();
  report.with_offset = opts.with_offset;
  report.base_seed = base_seed;
  report.rows.resize(n_grid.size() * trials);

  parallel_for(report.rows.size(), opts.jobs, [&](std::size_t r) {
    ExperimentRow& row = report.rows[r];
    row.n = n_grid[r / trials];
    row.trial = r % trials;
    row.seed = row_seed(base_seed, row.n, row.trial);
    row.lambda = schedule.lambda_of_n(row.n);
    row.sigma = schedule.sigma_of_n(row.n);
    row.tolerance = opts.solver.tol_opt > 0.0 ? opts.solver.tol_opt : default_tolerance(row.n);
    const auto start = std::chrono::steady_clock::now();
    try {
      SvmProblem problem{sample(dist, row.n, row.seed), row.lambda, GaussianKernel(row.sigma),
                         opts.with_offset};
      const SvmSolution sol = train(problem, opts.solver);
      const FieldFunction f = sol.expansion.as_function();
      row.excess_risk = excess_risk(dist, f, opts.integration);
      row.excess_hinge_risk = excess_hinge_risk(dist, f, false, opts.integration).direct.value;
      row.rkhs_norm = sol.expansion.rkhs_norm();
      row.offset = sol.expansion.offset();
      row.certificate = sol.certificate;
      row.iterations = sol.iterations;
    } catch (const SolverError& e) {
      row.diagnostic = std::string("solver: ") + e.what();
      row.certificate = e.best_certificate();
      row.iterations = e.iterations();
    } catch (const std::exception& e) {
      row.diagnostic = e.what();
    }
    row.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  });
  return report;
}

RateFit fit_rate(const ExperimentReport& report, std::size_t bootstrap, std::uint64_t seed,
                 double level) {
  std::map<std::size_t, std::vector<double>> by_n;
  for (const auto& row : report.rows) {
    if (row.ok()) by_n[row.n].push_back(std::max(0.0, row.excess_risk.value));
  }
  RateFit fit;
  for (const auto& [n, values] : by_n) {
    fit.n_values.push_back(n);
    fit.medians.push_back(stats::median(values));
  }
  if (std::all_of(fit.medians.begin(), fit.medians.end(), [](double m) { return m == 0.0; })) {
    fit.exact_learning = true;
    return fit;
  }
  const auto slope_of = [](const std::vector<std::size_t>& ns, const std::vector<double>& med) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      if (med[i] > 0.0) {
        x.push_back(static_cast<double>(ns[i]));
        y.push_back(med[i]);
      }
    }
    return x.size() >= 2 ? std::optional(stats::log_log_fit(x, y)) : std::nullopt;
  };
  const auto positive = std::count_if(fit.medians.begin(), fit.medians.end(),
                                      [](double m) { return m > 0.0; });
  if (positive < 4) {
    throw std::invalid_argument("fit_rate: fewer than 4 sample sizes with positive median");
  }
  const auto main = slope_of(fit.n_values, fit.medians);
  fit.beta_hat = -main->slope;
  fit.r_squared = main->r_squared;

  RandomStream rng(seed);
  std::vector<double> slopes;
  for (std::size_t b = 0; b < bootstrap; ++b) {
    std::vector<double> med;
    for (const auto& [n, values] : by_n) {
      std::vector<double> resample(values.size());
      for (double& v : resample) v = values[rng.next_u64() % values.size()];
      med.push_back(stats::median(std::move(resample)));
    }
    if (const auto s = slope_of(fit.n_values, med)) slopes.push_back(-s->slope);
  }
  if (!slopes.empty()) {
    fit.ci_low = stats::quantile(slopes, 0.5 * (1.0 - level));
    fit.ci_high = stats::quantile(slopes, 0.5 * (1.0 + level));
  } else {
    fit.ci_low = fit.ci_high = fit.beta_hat;
  }
  return fit;
}

PointwiseVariance pointwise_variance(double p, double t) {
  if (!(p >= 0.0 && p <= 1.0) || p == 0.5) {
    throw std::invalid_argument("pointwise_variance: p must lie in [0, 1] and differ from 1/2");
  }
  const double fstar = sign_of(2.0 * p - 1.0);
  const double dp = hinge(1.0, t) - hinge(1.0, fstar);
  const double dm = hinge(-1.0, t) - hinge(-1.0, fstar);
  PointwiseVariance r;
  r.v = p * dp * dp + (1.0 - p) * dm * dm;
  r.m = p * dp + (1.0 - p) * dm;
  r.rhs = (std::abs(t) + 2.0 / std::abs(2.0 * p - 1.0)) * r.m;
  r.slack = r.rhs - r.v;
  return r;
}

double variance_constant(const SyntheticDistribution& dist, double q,
                         const IntegrationOptions& opts) {
  if (q == 0.0) return 1.0;
  return inverse_margin_norm(dist, q, opts) + 2.0;
}

VarianceCheck variance_bound_check(const SyntheticDistribution& dist, const FieldFunction& f,
                                   double q, double sup_f, const IntegrationOptions& opts) {
  double scanned = 0.0;
  const auto cuts = decision_breakpoints(dist, f, kHingeLevels, opts.crossing_grid, &scanned);
  VarianceCheck c;
  c.sup_f = sup_f >= 0.0 ? sup_f : scanned;
  const auto diff = [&](std::span<const double> x, double y) {
    const double fp = sign_of(2.0 * dist.eta(x) - 1.0);
    return hinge(y, f(x)) - hinge(y, fp);
  };
  c.lhs = dist.expectation(
                  [&](std::span<const double> x) {
                    const double e = dist.eta(x);
                    const double a = diff(x, 1.0), b = diff(x, -1.0);
                    return e * a * a + (1.0 - e) * b * b;
                  },
                  cuts, opts)
              .value;
  c.excess = dist.expectation(
                     [&](std::span<const double> x) {
                       const double e = dist.eta(x);
                       return e * diff(x, 1.0) + (1.0 - e) * diff(x, -1.0);
                     },
                     cuts, opts)
                 .value;
  c.constant = variance_constant(dist, q, opts);
  c.rhs = c.constant * std::pow(c.sup_f + 1.0, outer_exponent(q)) *
          std::pow(std::max(0.0, c.excess), inner_exponent(q));
  c.margin = c.rhs - c.lhs;
  return c;
}

RegularizedVarianceCheck regularized_variance_check(const SyntheticDistribution& dist,
                                                    const KernelExpansion& f,
                                                    const KernelExpansion& f0, double lambda,
                                                    double gamma, double q, double a,
                                                    const IntegrationOptions& opts) {
  const double shift = lambda * (f.rkhs_norm_squared() - f0.rkhs_norm_squared());
  std::vector<double> cuts = decision_breakpoints(dist, f.as_function(), kHingeLevels,
                                                  opts.crossing_grid);
  const auto more = decision_breakpoints(dist, f0.as_function(), kHingeLevels, opts.crossing_grid);
  cuts.insert(cuts.end(), more.begin(), more.end());
  const auto diff = [&](std::span<const double> x, double y) {
    return shift + hinge(y, f(x)) - hinge(y, f0(x));
  };
  RegularizedVarianceCheck c;
  c.lhs = dist.expectation(
                  [&](std::span<const double> x) {
                    const double e = dist.eta(x);
                    const double u = diff(x, 1.0), v = diff(x, -1.0);
                    return e * u * u + (1.0 - e) * v * v;
                  },
                  cuts, opts)
              .value;
  c.excess = std::max(0.0, dist.expectation(
                                   [&](std::span<const double> x) {
                                     const double e = dist.eta(x);
                                     return e * diff(x, 1.0) + (1.0 - e) * diff(x, -1.0);
                                   },
                                   cuts, opts)
                               .value);
  c.constant = q == 0.0 ? 8.0 : 16.0 + 8.0 * inverse_margin_norm(dist, q, opts);
  c.c_hat = std::pow(gamma + 1.0, outer_exponent(q));
  const double p = inner_exponent(q);
  c.rhs = c.constant * c.c_hat * std::pow(c.excess, p) +
          2.0 * c.constant * c.c_hat * std::pow(std::max(0.0, a), p);
  c.margin = c.rhs - c.lhs;
  return c;
}

}  // namespace svmrates
