#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace svmrates {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// A numerically integrated quantity. For deterministic quadrature `error` is
// the achieved absolute error estimate; for Monte Carlo it is one standard
// error of the mean.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
  bool monte_carlo = false;
  bool converged = true;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

using ScalarFunction = std::function<double(double)>;
using FieldFunction = std::function<double(std::span<const double>)>;

namespace quad {

struct SimpsonOptions {
  double abs_tol = 1e-8;
  // Subdivision levels forced before the error test may accept a panel;
  // keeps narrow peaks from slipping between the first five samples.
  int min_depth = 6;
  int max_depth = 48;
  // Panels are also accepted once the Simpson correction is below this
  // fraction of the panel value, so rounding noise is never chased.
  double rel_floor = 1e-13;
  // Subdivision stops (unconverged) after this many integrand calls.
  std::size_t max_evaluations = 20'000'000;
};

// Adaptive Simpson on [a, b]. The integrand is only sampled strictly inside
// the interval (endpoints are nudged inward by a relative 1e-13), so jump
// discontinuities placed exactly at a or b cost nothing.
Estimate adaptive_simpson(const ScalarFunction& f, double a, double b,
                          const SimpsonOptions& opts = {});

// Splits [a, b] at every breakpoint strictly inside it and integrates each
// piece with a share of the tolerance proportional to its length.
Estimate adaptive_simpson(const ScalarFunction& f, double a, double b,
                          std::span<const double> breakpoints,
                          const SimpsonOptions& opts = {});

// Gauss–Legendre nodes and weights on [-1, 1] (Newton on P_m).
class GaussLegendreRule {
 public:
  explicit GaussLegendreRule(int order);
  int order() const noexcept { return static_cast<int>(nodes_.size()); }
  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }

  // Composite rule with `panels` equal panels on [a, b].
  double integrate(const ScalarFunction& f, double a, double b,
                   int panels) const;

 private:
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

// Stratified Monte Carlo of f over the box [-1, 1]^d: strata_per_axis^d
// equal cells, `draws_per_stratum` (>= 2) uniform draws in each.
Estimate stratified_monte_carlo(const FieldFunction& f, std::size_t dim,
                                std::size_t strata_per_axis,
                                std::size_t draws_per_stratum,
                                std::uint64_t seed);

// Points in [a, b] where f crosses any of `levels`, located on a uniform
// grid of `grid` cells and refined by bisection. Sorted ascending. If
// `sup_abs` is non-null it receives max |f| over the grid nodes.
std::vector<double> level_crossings(const ScalarFunction& f, double a,
                                    double b, std::span<const double> levels,
                                    std::size_t grid = 2048,
                                    double* sup_abs = nullptr);

}  // namespace quad

// Deterministic, platform-independent random stream (splitmix64 seeded
// xoshiro256**). Uniforms use the top 53 bits.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);
  std::uint64_t next_u64() noexcept;
  double uniform() noexcept;  // [0, 1)
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform(); }
  double normal() noexcept;   // Box–Muller, no cached second variate

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

// Seed for a derived stream: splitmix64 folded over the parts in order.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) noexcept;

// Runs body(i) for i in [0, count) on up to `jobs` threads (0 = hardware
// concurrency). The first exception thrown by any body is rethrown.
void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body);

}  // namespace svmrates
