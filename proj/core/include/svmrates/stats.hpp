#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace svmrates::stats {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

// Ordinary least squares of y on x. Requires at least two distinct x.
LinearFit ols(std::span<const double> x, std::span<const double> y);

// OLS of log(y) on log(x) over the pairs with x > 0 and y > 0.
LinearFit log_log_fit(std::span<const double> x, std::span<const double> y);

double median(std::vector<double> values);
double mean(std::span<const double> values);
double standard_error(std::span<const double> values);

// Linear-interpolated empirical quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> a, std::span<const double> b);

std::vector<double> log_space(double lo, double hi, std::size_t count);

}  // namespace svmrates::stats
