#include "svmrates/approximation.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "svmrates/noise.hpp"

namespace svmrates {

Estimate witness_excess_risk(const SyntheticDistribution& dist, double sigma,
                             const ApproxOptions& opts) {
  const ApproxWitness witness(dist, sigma, opts.witness);
  return excess_hinge_risk(dist, witness.as_function(), false, opts.integration).direct;
}

WitnessValue approx_error_witness(const SyntheticDistribution& dist, double sigma,
                                  double lambda, const ApproxOptions& opts) {
  if (!(lambda > 0.0)) throw std::invalid_argument("approx_error_witness: lambda must be > 0");
  const ApproxWitness witness(dist, sigma, opts.witness);
  WitnessValue v;
  v.norm_term = lambda * witness.g_norm_squared();
  v.risk_term = witness_excess_risk(dist, sigma, opts);
  v.value = v.norm_term + std::max(0.0, v.risk_term.value);
  return v;
}

EmpiricalValue approx_error_empirical(const SyntheticDistribution& dist, double sigma,
                                      double lambda, const ApproxOptions& opts) {
  if (opts.empirical_seeds == 0) {
    throw std::invalid_argument("approx_error_empirical: need at least one seed");
  }
  EmpiricalValue out;
  for (std::size_t s = 0; s < opts.empirical_seeds; ++s) {
    SvmProblem problem{sample(dist, opts.n_dense, derive_seed(opts.seed, {s})), lambda,
                       GaussianKernel(sigma), false};
    const SvmSolution sol = train(problem, opts.solver);
    const Estimate excess =
        excess_hinge_risk(dist, sol.expansion.as_function(), false, opts.integration).direct;
    out.per_seed.push_back(lambda * sol.expansion.rkhs_norm_squared() +
                           std::max(0.0, excess.value));
  }
  out.value = stats::mean(out.per_seed);
  out.standard_error = out.per_seed.size() > 1 ? stats::standard_error(out.per_seed) : 0.0;
  return out;
}

double optimal_sigma(double lambda, double alpha, std::size_t d) {
  if (!(lambda > 0.0) || !(alpha > 0.0) || !std::isfinite(alpha) || d == 0) {
    throw std::invalid_argument("optimal_sigma: need lambda > 0, finite alpha > 0, d >= 1");
  }
  return std::pow(lambda, -1.0 / ((alpha + 1.0) * static_cast<double>(d)));
}

DecayFit decay_slope(const SyntheticDistribution& dist, const std::vector<double>& lambda_grid,
                     double alpha, std::size_t d, double fixed_sigma, const ApproxOptions& opts) {
  if (lambda_grid.size() < 4) throw std::invalid_argument("decay_slope: need >= 4 lambdas");
  if (std::isinf(alpha) && !(fixed_sigma > 0.0)) {
    throw std::invalid_argument("decay_slope: infinite alpha needs a fixed sigma");
  }
  DecayFit out;
  out.lambdas = lambda_grid;
  for (double lambda : lambda_grid) {
    const double sigma = std::isinf(alpha) ? fixed_sigma : optimal_sigma(lambda, alpha, d);
    out.sigmas.push_back(sigma);
    out.values.push_back(approx_error_witness(dist, sigma, lambda, opts).value);
  }
  out.fit = stats::log_log_fit(out.lambdas, out.values);
  return out;
}

double approx_bound_rhs(double sigma, double lambda, double alpha, double c_geo, std::size_t d) {
  const double dd = static_cast<double>(d);
  return std::pow(sigma, dd) * lambda +
         c_geo * std::pow(2.0 * dd, 0.5 * alpha * dd) * std::pow(sigma, -alpha * dd);
}

RatioScan approx_ratio_scan(const SyntheticDistribution& dist,
                            const std::vector<double>& sigma_grid,
                            const std::vector<double>& lambda_grid, double c_geo,
                            bool with_empirical, std::size_t jobs,
                            const ApproxOptions& opts) {
  if (sigma_grid.empty() || lambda_grid.empty()) {
    throw std::invalid_argument("approx_ratio_scan: empty grid");
  }
  const auto& known = dist.known_exponents();
  double alpha = known ? known->alpha : 0.0;
  if (c_geo <= 0.0 && known && known->geometric_constant) c_geo = *known->geometric_constant;
  if (c_geo <= 0.0 || alpha <= 0.0) {
    const auto fit = fit_geometric(dist, stats::log_space(1e-4, 1e-2, 9));
    if (alpha <= 0.0) alpha = fit.alpha_hat;
    if (c_geo <= 0.0) c_geo = fit.c_hat;
  }
  if (!std::isfinite(alpha)) {
    throw std::invalid_argument("approx_ratio_scan: needs a finite geometric exponent");
  }

  std::vector<Estimate> risks(sigma_grid.size());
  parallel_for(sigma_grid.size(), jobs,
               [&](std::size_t i) { risks[i] = witness_excess_risk(dist, sigma_grid[i], opts); });

  RatioScan scan;
  for (std::size_t i = 0; i < sigma_grid.size(); ++i) {
    const ApproxWitness witness(dist, sigma_grid[i], opts.witness);
    for (double lambda : lambda_grid) {
      ApproxRow row;
      row.sigma = sigma_grid[i];
      row.lambda = lambda;
      row.witness = lambda * witness.g_norm_squared() + std::max(0.0, risks[i].value);
      row.empirical = std::numeric_limits<double>::quiet_NaN();
      row.empirical_error = std::numeric_limits<double>::quiet_NaN();
      row.rhs = approx_bound_rhs(row.sigma, lambda, alpha, c_geo, dist.dim());
      row.ratio = row.witness / row.rhs;
      scan.rows.push_back(row);
    }
  }
  if (with_empirical) {
    parallel_for(scan.rows.size(), jobs, [&](std::size_t r) {
      const auto e = approx_error_empirical(dist, scan.rows[r].sigma, scan.rows[r].lambda, opts);
      scan.rows[r].empirical = e.value;
      scan.rows[r].empirical_error = e.standard_error;
    });
  }
  for (const auto& row : scan.rows) {
    if (row.ratio > scan.max_ratio) {
      scan.max_ratio = row.ratio;
      scan.argmax_sigma = row.sigma;
      scan.argmax_lambda = row.lambda;
    }
  }
  return scan;
}

std::vector<double> refine_geometric_grid(const std::vector<double>& grid) {
  std::vector<double> out;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) out.push_back(std::sqrt(grid[i - 1] * grid[i]));
    out.push_back(grid[i]);
  }
  return out;
}

}  // namespace svmrates
