#include "svmrates/numeric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

namespace svmrates {
namespace quad {
namespace {

struct SimpsonState {
  const ScalarFunction& f;
  double lo;
  double hi;
  int min_depth;
  int max_depth;
  double rel_floor;
  std::size_t max_evaluations;
  double error = 0.0;
  bool converged = true;
  std::size_t evaluations = 0;

  double eval(double x) {
    ++evaluations;
    const double nudge = 1e-13 * (hi - lo);
    return f(std::clamp(x, lo + nudge, hi - nudge));
  }

  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    const int level = max_depth - depth;
    if (level >= min_depth && (std::abs(delta) <= 15.0 * tol ||
                               std::abs(delta) <= rel_floor * (std::abs(left) + std::abs(right)))) {
      error += std::abs(delta) / 15.0;
      return left + right + delta / 15.0;
    }
    if (depth <= 0 || evaluations >= max_evaluations) {
      error += std::abs(delta) / 15.0;
      if (std::abs(delta) > 15.0 * tol) converged = false;
      return left + right + delta / 15.0;
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

Estimate adaptive_simpson(const ScalarFunction& f, double a, double b,
                          const SimpsonOptions& opts) {
  if (!(b > a)) return Estimate{0.0, 0.0, false, true};
  SimpsonState s{f, a, b, opts.min_depth, opts.max_depth, opts.rel_floor, opts.max_evaluations};
  const double fa = s.eval(a);
  const double fb = s.eval(b);
  const double fm = s.eval(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double value = s.recurse(a, b, fa, fm, fb, whole, opts.abs_tol, opts.max_depth);
  if (!std::isfinite(value)) {
    throw QuadratureError("adaptive_simpson: non-finite integrand", kInfinity);
  }
  return Estimate{value, s.error, false, s.converged};
}

Estimate adaptive_simpson(const ScalarFunction& f, double a, double b,
                          std::span<const double> breakpoints,
                          const SimpsonOptions& opts) {
  std::vector<double> cuts{a};
  for (double p : breakpoints) {
    if (p > a && p < b) cuts.push_back(p);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  Estimate total;
  const double length = b - a;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    const double lo = cuts[k];
    const double hi = cuts[k + 1];
    if (!(hi > lo)) continue;
    SimpsonOptions piece = opts;
    piece.abs_tol = opts.abs_tol * (hi - lo) / length;
    const Estimate e = adaptive_simpson(f, lo, hi, piece);
    total.value += e.value;
    total.error += e.error;
    total.converged = total.converged && e.converged;
  }
  return total;
}

GaussLegendreRule::GaussLegendreRule(int order) {
  if (order < 1) throw std::invalid_argument("GaussLegendreRule: order must be >= 1");
  nodes_.resize(order);
  weights_.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    nodes_[i] = -x;
    nodes_[order - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights_[i] = w;
    weights_[order - 1 - i] = w;
  }
}

double GaussLegendreRule::integrate(const ScalarFunction& f, double a, double b,
                                    int panels) const {
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    double panel = 0.0;
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      panel += weights_[k] * f(mid + 0.5 * h * nodes_[k]);
    }
    sum += 0.5 * h * panel;
  }
  return sum;
}

Estimate stratified_monte_carlo(const FieldFunction& f, std::size_t dim,
                                std::size_t strata_per_axis,
                                std::size_t draws_per_stratum,
                                std::uint64_t seed) {
  if (dim == 0 || strata_per_axis == 0 || draws_per_stratum < 2) {
    throw std::invalid_argument("stratified_monte_carlo: bad configuration");
  }
  std::size_t cells = 1;
  for (std::size_t k = 0; k < dim; ++k) cells *= strata_per_axis;
  const double width = 2.0 / static_cast<double>(strata_per_axis);
  const double cell_volume = std::pow(width, static_cast<double>(dim));

  RandomStream rng(seed);
  std::vector<double> x(dim);
  std::vector<std::size_t> index(dim, 0);
  double value = 0.0;
  double variance = 0.0;
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    for (std::size_t k = 0; k < dim; ++k) {
      index[k] = rest % strata_per_axis;
      rest /= strata_per_axis;
    }
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t j = 0; j < draws_per_stratum; ++j) {
      for (std::size_t k = 0; k < dim; ++k) {
        x[k] = -1.0 + width * (static_cast<double>(index[k]) + rng.uniform());
      }
      const double v = f(x);
      sum += v;
      sum_sq += v * v;
    }
    const double m = static_cast<double>(draws_per_stratum);
    const double mean = sum / m;
    const double sample_var = std::max(0.0, (sum_sq - m * mean * mean) / (m - 1.0));
    value += cell_volume * mean;
    variance += cell_volume * cell_volume * sample_var / m;
  }
  return Estimate{value, std::sqrt(variance), true, true};
}

std::vector<double> level_crossings(const ScalarFunction& f, double a, double b,
                                    std::span<const double> levels,
                                    std::size_t grid, double* sup_abs) {
  std::vector<double> roots;
  if (sup_abs) *sup_abs = 0.0;
  if (!(b > a) || grid == 0) return roots;
  const double h = (b - a) / static_cast<double>(grid);
  std::vector<double> xs(grid + 1), fs(grid + 1);
  for (std::size_t k = 0; k <= grid; ++k) {
    xs[k] = (k == grid) ? b : a + h * static_cast<double>(k);
    fs[k] = f(xs[k]);
    if (sup_abs) *sup_abs = std::max(*sup_abs, std::abs(fs[k]));
  }
  for (double level : levels) {
    for (std::size_t k = 0; k <= grid; ++k) {
      const double g0 = fs[k] - level;
      if (g0 == 0.0) {
        roots.push_back(xs[k]);
        continue;
      }
      if (k == grid) break;
      const double g1 = fs[k + 1] - level;
      if (g1 == 0.0 || (g0 < 0.0) == (g1 < 0.0)) continue;
      double lo = xs[k];
      double hi = xs[k + 1];
      double glo = g0;
      for (int it = 0; it < 80 && hi - lo > 1e-15 * (1.0 + std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        const double gm = f(mid) - level;
        if (gm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((gm < 0.0) == (glo < 0.0)) {
          lo = mid;
          glo = gm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace quad

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> parts) noexcept {
  std::uint64_t h = splitmix64(base);
  for (std::uint64_t p : parts) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

RandomStream::RandomStream(std::uint64_t seed) {
  std::uint64_t x = seed;
  for (auto& word : s_) {
    x += 0x9e3779b97f4a7c15ULL;
    word = splitmix64(x);
  }
}

std::uint64_t RandomStream::next_u64() noexcept {
  const auto rotl = [](std::uint64_t v, int k) { return (v << k) | (v >> (64 - k)); };
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double RandomStream::uniform() noexcept {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::normal() noexcept {
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void parallel_for(std::size_t count, std::size_t jobs,
                  const std::function<void(std::size_t)>& body) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, count);
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace svmrates
