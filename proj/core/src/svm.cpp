#include "svmrates/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>

#include "svmrates/numeric.hpp"

namespace svmrates {
namespace {

struct DualState {
  Eigen::VectorXd alpha;
  Eigen::VectorXd f;  // f_α at the training points, offset excluded
  double offset = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
};

Eigen::VectorXd label_vector(const TrainingSet& t) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(t.size()));
  for (std::size_t i = 0; i < t.size(); ++i) y[static_cast<Eigen::Index>(i)] = t.label(i);
  return y;
}

// Fills primal, dual and gap from alpha and f.
void certify(DualState& s, const Eigen::VectorXd& y, const std::vector<int>& labels,
             double lambda, bool with_offset) {
  const auto n = static_cast<double>(y.size());
  s.offset = with_offset ? optimal_offset(s.f, labels) : 0.0;
  // ‖f‖² = cᵀKc with c = α∘y/(2λ) and Kc = f.
  const double norm2 = std::max(0.0, s.alpha.cwiseProduct(y).dot(s.f) / (2.0 * lambda));
  double hinge = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    hinge += std::max(0.0, 1.0 - y[i] * (s.f[i] + s.offset));
  }
  s.primal = lambda * norm2 + hinge / n;
  s.dual = s.alpha.sum() - lambda * norm2;
  s.gap = s.primal - s.dual;
}

void recompute_f(DualState& s, const Eigen::MatrixXd& k, const Eigen::VectorXd& y,
                 double lambda) {
  s.f = k * s.alpha.cwiseProduct(y) / (2.0 * lambda);
}

std::vector<std::size_t> visiting_order(std::size_t n, RandomStream* rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (rng != nullptr) {
    for (std::size_t i = n; i > 1; --i) {
      const auto j = static_cast<std::size_t>(rng->next_u64() % i);
      std::swap(order[i - 1], order[j]);
    }
  }
  return order;
}

DualState solve_coordinate(const Eigen::MatrixXd& k, const Eigen::VectorXd& y,
                           const std::vector<int>& labels, double lambda, double tol,
                           const SolverOptions& opts, std::size_t& passes) {
  const Eigen::Index n = y.size();
  const double cap = 1.0 / static_cast<double>(n);
  DualState s{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  std::optional<RandomStream> rng;
  if (opts.order_seed != 0) rng.emplace(opts.order_seed);
  auto order = visiting_order(static_cast<std::size_t>(n), rng ? &*rng : nullptr);
  double best = kInfinity;

  for (passes = 1; passes <= opts.max_passes; ++passes) {
    if (rng) order = visiting_order(static_cast<std::size_t>(n), &*rng);
    for (std::size_t idx : order) {
      const auto i = static_cast<Eigen::Index>(idx);
      const double kii = k(i, i);
      const double step = 2.0 * lambda * (1.0 - y[i] * s.f[i]) / kii;
      const double next = std::clamp(s.alpha[i] + step, 0.0, cap);
      const double delta = next - s.alpha[i];
      if (delta == 0.0) continue;
      s.alpha[i] = next;
      s.f += (delta * y[i] / (2.0 * lambda)) * k.col(i);
    }
    certify(s, y, labels, lambda, false);
    if (s.gap <= tol) {
      recompute_f(s, k, y, lambda);
      certify(s, y, labels, lambda, false);
      if (s.gap <= tol) return s;
    }
    best = std::min(best, s.gap);
  }
  throw SolverError("train: iteration budget exhausted", best, opts.max_passes);
}

// Second-order working-set SMO on min ½αᵀQ̃α - eᵀα, Q̃ = (yyᵀ ∘ K)/(2λ),
// 0 <= α <= 1/n, yᵀα = 0. Gradient G_t = y_t f_t - 1.
DualState solve_smo(const Eigen::MatrixXd& k, const Eigen::VectorXd& y,
                    const std::vector<int>& labels, double lambda, double tol,
                    const SolverOptions& opts, std::size_t& passes) {
  const Eigen::Index n = y.size();
  const double cap = 1.0 / static_cast<double>(n);
  const double scale = 1.0 / (2.0 * lambda);
  constexpr double kTau = 1e-12;
  DualState s{Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)};
  Eigen::VectorXd grad = -Eigen::VectorXd::Ones(n);
  const auto q = [&](Eigen::Index a, Eigen::Index b) { return y[a] * y[b] * k(a, b) * scale; };
  const auto at_upper = [&](Eigen::Index t) { return s.alpha[t] >= cap; };
  const auto at_lower = [&](Eigen::Index t) { return s.alpha[t] <= 0.0; };

  // Optional permutation of candidate scanning, which changes tie-breaking.
  std::optional<RandomStream> rng;
  if (opts.order_seed != 0) rng.emplace(opts.order_seed);
  const auto perm = visiting_order(static_cast<std::size_t>(n), rng ? &*rng : nullptr);

  double best = kInfinity;
  for (passes = 1; passes <= opts.max_passes; ++passes) {
    bool stalled = false;
    for (Eigen::Index iter = 0; iter < n; ++iter) {
      double gmax = -kInfinity;
      Eigen::Index i = -1;
      for (std::size_t p : perm) {
        const auto t = static_cast<Eigen::Index>(p);
        if (y[t] > 0) {
          if (!at_upper(t) && -grad[t] >= gmax) gmax = -grad[t], i = t;
        } else if (!at_lower(t) && grad[t] >= gmax) {
          gmax = grad[t], i = t;
        }
      }
      if (i < 0) {
        stalled = true;
        break;
      }
      double gmax2 = -kInfinity;
      double best_obj = kInfinity;
      Eigen::Index j = -1;
      for (std::size_t p : perm) {
        const auto t = static_cast<Eigen::Index>(p);
        if (y[t] > 0) {
          if (at_lower(t)) continue;
          const double diff = gmax + grad[t];
          gmax2 = std::max(gmax2, grad[t]);
          if (diff > 0) {
            double a = q(i, i) + q(t, t) - 2.0 * y[i] * y[t] * q(i, t);
            if (a <= 0) a = kTau;
            const double obj = -diff * diff / a;
            if (obj <= best_obj) best_obj = obj, j = t;
          }
        } else {
          if (at_upper(t)) continue;
          const double diff = gmax - grad[t];
          gmax2 = std::max(gmax2, -grad[t]);
          if (diff > 0) {
            double a = q(i, i) + q(t, t) + 2.0 * y[i] * y[t] * q(i, t);
            if (a <= 0) a = kTau;
            const double obj = -diff * diff / a;
            if (obj <= best_obj) best_obj = obj, j = t;
          }
        }
      }
      if (j < 0 || gmax + gmax2 <= 0.0) {
        stalled = true;
        break;
      }

      const double ai = s.alpha[i], aj = s.alpha[j];
      const double qij = q(i, j);
      if (y[i] != y[j]) {
        double a = q(i, i) + q(j, j) + 2.0 * qij;
        if (a <= 0) a = kTau;
        const double delta = (-grad[i] - grad[j]) / a;
        const double diff = ai - aj;
        double ni = ai + delta, nj = aj + delta;
        if (diff > 0) {
          if (nj < 0) nj = 0, ni = diff;
        } else if (ni < 0) {
          ni = 0, nj = -diff;
        }
        if (diff > 0) {
          if (ni > cap) ni = cap, nj = cap - diff;
        } else if (nj > cap) {
          nj = cap, ni = cap + diff;
        }
        s.alpha[i] = ni, s.alpha[j] = nj;
      } else {
        double a = q(i, i) + q(j, j) - 2.0 * qij;
        if (a <= 0) a = kTau;
        const double delta = (grad[i] - grad[j]) / a;
        const double sum = ai + aj;
        double ni = ai - delta, nj = aj + delta;
        if (sum > cap) {
          if (ni > cap) ni = cap, nj = sum - cap;
        } else if (nj < 0) {
          nj = 0, ni = sum;
        }
        if (sum > cap) {
          if (nj > cap) nj = cap, ni = sum - cap;
        } else if (ni < 0) {
          ni = 0, nj = sum;
        }
        s.alpha[i] = ni, s.alpha[j] = nj;
      }
      const double di = s.alpha[i] - ai, dj = s.alpha[j] - aj;
      s.f += (di * y[i] * scale) * k.col(i) + (dj * y[j] * scale) * k.col(j);
      grad = y.cwiseProduct(s.f).array() - 1.0;
    }
    certify(s, y, labels, lambda, true);
    if (s.gap <= tol || stalled) {
      recompute_f(s, k, y, lambda);
      grad = y.cwiseProduct(s.f).array() - 1.0;
      certify(s, y, labels, lambda, true);
      if (s.gap <= tol) return s;
      if (stalled) {
        throw SolverError("train: no violating pair left but the gap exceeds the target", s.gap,
                          passes);
      }
    }
    best = std::min(best, s.gap);
  }
  throw SolverError("train: iteration budget exhausted", best, opts.max_passes);
}

// Projection onto {0 <= a <= cap} (and yᵀa = 0 when `equality`).
Eigen::VectorXd project(const Eigen::VectorXd& z, const Eigen::VectorXd& y, double cap,
                        bool equality) {
  if (!equality) return z.cwiseMax(0.0).cwiseMin(cap);
  const auto at = [&](double nu) { return (z - nu * y).cwiseMax(0.0).cwiseMin(cap).eval(); };
  double hi = z.cwiseAbs().maxCoeff() + cap, lo = -hi;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (y.dot(at(mid)) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return at(0.5 * (lo + hi));
}

// FISTA with gradient restart on the cost-parameter dual, α_std = α/(2λ).
DualState solve_projected_gradient(const Eigen::MatrixXd& k, const Eigen::VectorXd& y,
                                   const std::vector<int>& labels, double lambda, double tol,
                                   bool with_offset, const SolverOptions& opts,
                                   std::size_t& passes) {
  const Eigen::Index n = y.size();
  const double cost = 1.0 / (2.0 * lambda * static_cast<double>(n));
  const Eigen::MatrixXd qm = y.asDiagonal() * k * y.asDiagonal();
  const double lipschitz =
      std::max(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(qm, Eigen::EigenvaluesOnly)
                   .eigenvalues()
                   .maxCoeff(),
               1e-300);
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n), z = x;
  double t = 1.0;
  double best = kInfinity;
  DualState s;
  for (passes = 1; passes <= opts.max_passes; ++passes) {
    const Eigen::VectorXd step = z - (qm * z - Eigen::VectorXd::Ones(n)) / lipschitz;
    const Eigen::VectorXd next = project(step, y, cost, with_offset);
    const Eigen::VectorXd grad_next = qm * next - Eigen::VectorXd::Ones(n);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (grad_next.dot(next - x) > 0.0) {
      z = next;
      t = 1.0;
    } else {
      z = next + ((t - 1.0) / t_next) * (next - x);
      t = t_next;
    }
    x = next;

    s.alpha = 2.0 * lambda * x;
    s.f = k * x.cwiseProduct(y);
    certify(s, y, labels, lambda, with_offset);
    if (s.gap <= tol) return s;
    best = std::min(best, s.gap);
  }
  throw SolverError("train: iteration budget exhausted", best, opts.max_passes);
}

}  // namespace

double default_tolerance(std::size_t n) { return 1e-8 * static_cast<double>(n); }

double optimal_offset(const Eigen::VectorXd& f_values, const std::vector<int>& labels) {
  const std::size_t n = labels.size();
  if (static_cast<std::size_t>(f_values.size()) != n || n == 0) {
    throw std::invalid_argument("optimal_offset: size mismatch");
  }
  // Each term has a kink at b_i = y_i - f_i where the slope rises by one;
  // the slope starts at -#{y = +1}, so it vanishes between the order
  // statistics number n_pos and n_pos + 1.
  std::vector<double> kinks(n);
  std::size_t n_pos = 0;
  for (std::size_t i = 0; i < n; ++i) {
    kinks[i] = labels[i] - f_values[static_cast<Eigen::Index>(i)];
    if (labels[i] > 0) ++n_pos;
  }
  std::sort(kinks.begin(), kinks.end());
  const double lo = n_pos == 0 ? -kInfinity : kinks[n_pos - 1];
  const double hi = n_pos == n ? kInfinity : kinks[n_pos];
  return std::clamp(0.0, lo, hi);
}

double objective(const SvmProblem& problem, const KernelExpansion& f) {
  if (!(f.kernel() == problem.kernel)) {
    throw std::invalid_argument("objective: kernel differs from the problem's kernel");
  }
  const TrainingSet& t = problem.training_set;
  const double b = problem.with_offset ? f.offset() : 0.0;
  double hinge = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    hinge += std::max(0.0, 1.0 - t.label(i) * (f.function_part(t.point(i)) + b));
  }
  return problem.lambda * f.rkhs_norm_squared() + hinge / static_cast<double>(t.size());
}

SvmSolution train(const SvmProblem& problem, const SolverOptions& opts) {
  return train(problem, gram(problem.kernel, problem.training_set.points()), opts);
}

SvmSolution train(const SvmProblem& problem, const Eigen::MatrixXd& k,
                  const SolverOptions& opts) {
  const TrainingSet& t = problem.training_set;
  const std::size_t n = t.size();
  if (!(problem.lambda > 0.0) || !std::isfinite(problem.lambda)) {
    throw std::invalid_argument("train: lambda must be positive");
  }
  if (static_cast<std::size_t>(k.rows()) != n || static_cast<std::size_t>(k.cols()) != n) {
    throw std::invalid_argument("train: Gram matrix does not match the training set");
  }
  const double tol = opts.tol_opt > 0.0 ? opts.tol_opt : default_tolerance(n);
  const double lambda = problem.lambda;
  const Eigen::VectorXd y = label_vector(t);

  const bool all_same = std::all_of(t.labels().begin(), t.labels().end(),
                                    [&](int v) { return v == t.label(0); });
  if (problem.with_offset && all_same) {
    // f = 0, b = y*: zero hinge and zero penalty.
    return SvmSolution{
        KernelExpansion(problem.kernel, t.points(), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)),
                        static_cast<double>(t.label(0))),
        0.0, 0.0, 0.0, 0, lambda, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))};
  }

  std::size_t passes = 0;
  DualState s;
  if (opts.route == SolverRoute::projected_gradient) {
    s = solve_projected_gradient(k, y, t.labels(), lambda, tol, problem.with_offset, opts, passes);
  } else if (problem.with_offset) {
    s = solve_smo(k, y, t.labels(), lambda, tol, opts, passes);
  } else {
    s = solve_coordinate(k, y, t.labels(), lambda, tol, opts, passes);
  }
  Eigen::VectorXd coefficients = s.alpha.cwiseProduct(y) / (2.0 * lambda);
  return SvmSolution{KernelExpansion(problem.kernel, t.points(), std::move(coefficients), s.offset),
                     s.primal,
                     s.dual,
                     std::max(0.0, s.gap),
                     passes,
                     lambda,
                     std::move(s.alpha)};
}

BoundCheck norm_bound_check(const SvmSolution& solution, double lambda, double tol) {
  const double slack = 1.0 / std::sqrt(lambda) + tol - solution.expansion.rkhs_norm();
  return BoundCheck{slack >= 0.0, slack};
}

BoundCheck offset_bound_check(const SvmSolution& solution, double tol) {
  const KernelExpansion& f = solution.expansion;
  double sup = 0.0;
  for (Eigen::Index i = 0; i < f.centers().rows(); ++i) {
    const auto row = f.centers().row(i);
    sup = std::max(sup, std::abs(f.function_part({row.data(), f.dim()})));
  }
  if (f.dim() == 1) {
    constexpr int kGrid = 2000;
    for (int g = 0; g <= kGrid; ++g) {
      const double x = -1.0 + 2.0 * g / kGrid;
      sup = std::max(sup, std::abs(f.function_part({&x, 1})));
    }
  }
  const double slack = sup + 1.0 + tol - std::abs(f.offset());
  return BoundCheck{slack >= 0.0, slack};
}

}  // namespace svmrates
