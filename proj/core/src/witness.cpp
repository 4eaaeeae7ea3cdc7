#include "svmrates/witness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace svmrates {
namespace {

// exp(-2σ²s²) < e^{-40} beyond this many 1/σ units.
const double kWindow = std::sqrt(20.0);

}  // namespace

ApproxWitness::ApproxWitness(SyntheticDistribution dist, double sigma, WitnessOptions opts)
    : dist_(std::move(dist)),
      sigma_(sigma),
      opts_(opts),
      rule_1d_(opts.order_1d),
      rule_2d_(opts.order_2d) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("ApproxWitness: sigma must be positive");
  }
  if (dist_.dim() > 2) {
    throw std::invalid_argument("ApproxWitness: only d = 1 and d = 2 are supported");
  }
  // Probe points: the centre, the boundary of X and both sides of each break.
  std::vector<std::vector<double>> probes;
  const std::size_t d = dist_.dim();
  for (double x0 : {-1.0, -0.5, 0.0, 0.5, 1.0}) {
    std::vector<double> p(d, 0.0);
    p[0] = x0;
    probes.push_back(p);
  }
  for (double b : dist_.extended_sign_breaks()) {
    for (double off : {-0.5 / sigma_, 0.5 / sigma_}) {
      std::vector<double> p(d, 0.0);
      p[0] = b + off;
      probes.push_back(p);
    }
  }
  const int cap = d == 1 ? opts_.max_panels_1d : opts_.max_panels_2d;
  for (base_panels_ = 1; base_panels_ * 2 < cap; base_panels_ *= 2) {
    double worst = 0.0;
    for (const auto& p : probes) {
      const double a = d == 1 ? sum_1d(p[0], base_panels_) : sum_2d(p[0], p[1], base_panels_);
      const double b =
          d == 1 ? sum_1d(p[0], 2 * base_panels_) : sum_2d(p[0], p[1], 2 * base_panels_);
      worst = std::max(worst, std::abs(a - b));
    }
    if (worst < 1e-3 * opts_.refine_tol) break;
  }
}

double ApproxWitness::extended_target(std::span<const double> y) const {
  const double e = dist_.extended_eta(y);
  if (e > 0.5) return 1.0;
  if (e < 0.5) return -1.0;
  return 0.0;
}

double ApproxWitness::g_norm_squared() const {
  const double d = static_cast<double>(dist_.dim());
  return std::pow(sigma_ * sigma_ / std::numbers::pi, 0.5 * d) * std::pow(3.0, d) *
         dist_.domain_volume();
}

double ApproxWitness::g_norm_squared_bound() const {
  const double d = static_cast<double>(dist_.dim());
  const double theta = dist_.domain_volume();
  return std::pow(81.0 * sigma_ * sigma_ / std::numbers::pi, 0.5 * d) * theta * theta;
}

Estimate ApproxWitness::evaluate(std::span<const double> x) const {
  if (x.size() != dist_.dim()) throw std::invalid_argument("ApproxWitness: dimension mismatch");
  return refine(x);
}

FieldFunction ApproxWitness::as_function() const {
  return [this](std::span<const double> x) { return evaluate(x).value; };
}

Estimate ApproxWitness::refine(std::span<const double> x) const {
  const bool one_d = dist_.dim() == 1;
  const int cap = one_d ? opts_.max_panels_1d : opts_.max_panels_2d;
  const auto total = [&](int panels) {
    return one_d ? sum_1d(x[0], panels) : sum_2d(x[0], x[1], panels);
  };
  int panels = base_panels_;
  double previous = total(panels);
  for (;;) {
    const int next_panels = panels * 2;
    const double current = total(next_panels);
    const double diff = std::abs(current - previous);
    if (diff < opts_.refine_tol || next_panels >= cap) {
      return Estimate{current, diff, false, diff < opts_.refine_tol};
    }
    panels = next_panels;
    previous = current;
  }
}

double ApproxWitness::sum_1d(double x, int panels) const {
  const double s2 = 2.0 * sigma_ * sigma_;
  const double w = kWindow / sigma_;
  const double lo = std::max(x - w, -3.0);
  const double hi = std::min(x + w, 3.0);
  if (!(hi > lo)) return 0.0;

  std::vector<double> cuts{lo};
  for (double b : dist_.extended_sign_breaks()) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);

  double sum = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    sum += rule_1d_.integrate(
        [&](double y) {
          const double target = extended_target(std::span<const double>(&y, 1));
          return target == 0.0 ? 0.0 : target * std::exp(-s2 * (x - y) * (x - y));
        },
        cuts[k], cuts[k + 1], panels);
  }
  return std::sqrt(s2 / std::numbers::pi) * sum;
}

double ApproxWitness::sum_2d(double x0, double x1, int panels) const {
  const double s2 = 2.0 * sigma_ * sigma_;
  const double w = kWindow / sigma_;
  const double lo0 = std::max(x0 - w, -3.0), hi0 = std::min(x0 + w, 3.0);
  const double lo1 = std::max(x1 - w, -3.0), hi1 = std::min(x1 + w, 3.0);
  if (!(hi0 > lo0) || !(hi1 > lo1)) return 0.0;

  std::vector<double> cuts{lo0};
  for (double b : dist_.extended_sign_breaks()) {
    if (b > lo0 && b < hi0) cuts.push_back(b);
  }
  cuts.push_back(hi0);

  const auto nodes = rule_2d_.nodes();
  const auto weights = rule_2d_.weights();
  // Axis-1 nodes with their Gaussian factor, shared by every axis-0 piece.
  std::vector<double> ys1, ws1;
  const double h1 = (hi1 - lo1) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo1 + (p + 0.5) * h1;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      const double y = mid + 0.5 * h1 * nodes[k];
      ys1.push_back(y);
      ws1.push_back(0.5 * h1 * weights[k] * std::exp(-s2 * (x1 - y) * (x1 - y)));
    }
  }
  double sum = 0.0;
  std::array<double, 2> y{};
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    const double h0 = (cuts[c + 1] - cuts[c]) / panels;
    for (int p = 0; p < panels; ++p) {
      const double mid = cuts[c] + (p + 0.5) * h0;
      for (std::size_t k = 0; k < nodes.size(); ++k) {
        y[0] = mid + 0.5 * h0 * nodes[k];
        const double w0 = 0.5 * h0 * weights[k] * std::exp(-s2 * (x0 - y[0]) * (x0 - y[0]));
        double inner = 0.0;
        for (std::size_t j = 0; j < ys1.size(); ++j) {
          y[1] = ys1[j];
          inner += ws1[j] * extended_target(y);
        }
        sum += w0 * inner;
      }
    }
  }
  return s2 / std::numbers::pi * sum;
}

}  // namespace svmrates
