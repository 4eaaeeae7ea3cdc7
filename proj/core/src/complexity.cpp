#include "svmrates/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "svmrates/format.hpp"
#include "svmrates/stats.hpp"

namespace svmrates {

CoverProfile cover_profile(const PointMatrix& points, double sigma) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (n == 0) throw std::invalid_argument("cover_profile: no points");
  const Eigen::MatrixXd k = gram(GaussianKernel(sigma), points);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(k, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("cover_profile: eigensolver failed");
  const double floor = -1e-8 * static_cast<double>(n);
  CoverProfile p;
  p.n = n;
  p.sigma = sigma;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double mu = solver.eigenvalues()[i];
    if (mu < floor) {
      throw std::runtime_error("cover_profile: Gram eigenvalue " + format_number(mu) +
                               " is below the PSD tolerance");
    }
    p.semi_axes.push_back(std::sqrt(std::max(0.0, mu) / static_cast<double>(n)));
  }
  std::sort(p.semi_axes.begin(), p.semi_axes.end(), std::greater<>());
  return p;
}

CoverBounds log_cover_bounds(const CoverProfile& profile, double epsilon) {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("log_cover_bounds: epsilon must lie in (0, 1]");
  }
  CoverBounds b;
  for (double a : profile.semi_axes) {
    if (a > epsilon) b.lower += std::log(a / epsilon);
    if (a > 0.5 * epsilon) b.upper += std::log1p(4.0 * a / epsilon);
  }
  return b;
}

ScalingReport cover_scaling_scan(const PointMatrix& points, const std::vector<double>& sigma_grid,
                                 const std::vector<double>& epsilon_grid, std::size_t jobs) {
  if (sigma_grid.size() < 4 || epsilon_grid.size() < 4) {
    throw std::invalid_argument("cover_scaling_scan: grids need at least 4 points each");
  }
  ScalingReport r;
  r.sigma_grid = sigma_grid;
  r.epsilon_grid = epsilon_grid;
  const std::size_t ns = sigma_grid.size(), ne = epsilon_grid.size();
  std::vector<CoverProfile> profiles(ns);
  parallel_for(ns, jobs, [&](std::size_t i) { profiles[i] = cover_profile(points, sigma_grid[i]); });

  // upper[i][j] at σ_i, ε_j.
  std::vector<std::vector<double>> upper(ns, std::vector<double>(ne));
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 0; j < ne; ++j) {
      const CoverBounds b = log_cover_bounds(profiles[i], epsilon_grid[j]);
      upper[i][j] = b.upper;
      r.rows.push_back({sigma_grid[i], epsilon_grid[j], profiles[i].n, b.lower, b.upper});
    }
  }
  std::vector<double> inv_eps(ne);
  for (std::size_t j = 0; j < ne; ++j) inv_eps[j] = 1.0 / epsilon_grid[j];
  for (std::size_t i = 0; i < ns; ++i) {
    r.epsilon_slopes.push_back(stats::log_log_fit(inv_eps, upper[i]).slope);
  }
  for (std::size_t j = 0; j < ne; ++j) {
    std::vector<double> col(ns);
    for (std::size_t i = 0; i < ns; ++i) col[i] = upper[i][j];
    r.sigma_slopes.push_back(stats::log_log_fit(sigma_grid, col).slope);
  }
  const auto lg = [](double v) { return std::log(v); };
  for (std::size_t i = 1; i + 1 < ns; ++i) {
    for (std::size_t j = 1; j + 1 < ne; ++j) {
      const double u_e1 = upper[i][j + 1], u_e0 = upper[i][j - 1];
      const double u_s1 = upper[i + 1][j], u_s0 = upper[i - 1][j];
      if (!(u_e1 > 0.0 && u_e0 > 0.0 && u_s1 > 0.0 && u_s0 > 0.0)) continue;
      r.local_epsilon_slopes.push_back((lg(u_e1) - lg(u_e0)) /
                                       (lg(inv_eps[j + 1]) - lg(inv_eps[j - 1])));
      r.local_sigma_slopes.push_back((lg(u_s1) - lg(u_s0)) /
                                     (lg(sigma_grid[i + 1]) - lg(sigma_grid[i - 1])));
    }
  }
  if (r.local_epsilon_slopes.size() >= 2) {
    r.rank_correlation = stats::spearman(r.local_epsilon_slopes, r.local_sigma_slopes);
  }
  return r;
}

double rademacher_exact(const PointMatrix& points, double sigma, std::span<const int> signs) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (signs.size() != n) throw std::invalid_argument("rademacher_exact: sign vector length");
  if (n == 0) throw std::invalid_argument("rademacher_exact: no points");
  Eigen::VectorXd s(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (signs[i] != 1 && signs[i] != -1) {
      throw std::invalid_argument("rademacher_exact: signs must be +1 or -1");
    }
    s[static_cast<Eigen::Index>(i)] = signs[i];
  }
  const Eigen::MatrixXd k = gram(GaussianKernel(sigma), points);
  return std::sqrt(std::max(0.0, s.dot(k * s))) / static_cast<double>(n);
}

Estimate rademacher_average(const PointMatrix& points, double sigma, std::size_t trials,
                            std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("rademacher_average: trials must be >= 1");
  const auto n = static_cast<std::size_t>(points.rows());
  const Eigen::MatrixXd k = gram(GaussianKernel(sigma), points);
  RandomStream rng(seed);
  std::vector<double> values;
  Eigen::VectorXd s(static_cast<Eigen::Index>(n));
  for (std::size_t t = 0; t < trials; ++t) {
    for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = (rng.next_u64() >> 63) ? 1.0 : -1.0;
    values.push_back(std::sqrt(std::max(0.0, s.dot(k * s))) / static_cast<double>(n));
  }
  return Estimate{stats::mean(values), trials > 1 ? stats::standard_error(values) : 0.0, true,
                  true};
}

}  // namespace svmrates
