#include "svmrates/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace svmrates {

GaussianKernel::GaussianKernel(double sigma) : sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw std::invalid_argument("GaussianKernel: sigma must be positive and finite");
  }
}

double GaussianKernel::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw std::invalid_argument("GaussianKernel: dimension mismatch");
  double d2 = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    d2 += diff * diff;
  }
  return std::exp(-sigma_ * sigma_ * d2);
}

Eigen::MatrixXd cross_gram(const GaussianKernel& kernel, const PointMatrix& a,
                           const PointMatrix& b) {
  if (a.cols() != b.cols()) throw std::invalid_argument("cross_gram: dimension mismatch");
  const double s2 = kernel.sigma() * kernel.sigma();
  Eigen::MatrixXd k(a.rows(), b.rows());
  for (Eigen::Index j = 0; j < b.rows(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      k(i, j) = std::exp(-s2 * (a.row(i) - b.row(j)).squaredNorm());
    }
  }
  return k;
}

Eigen::MatrixXd gram(const GaussianKernel& kernel, const PointMatrix& points) {
  const Eigen::Index n = points.rows();
  const double s2 = kernel.sigma() * kernel.sigma();
  Eigen::MatrixXd k(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    k(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = std::exp(-s2 * (points.row(i) - points.row(j)).squaredNorm());
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

KernelExpansion::KernelExpansion(GaussianKernel kernel, PointMatrix centers,
                                 Eigen::VectorXd coefficients, double offset)
    : kernel_(kernel),
      centers_(std::move(centers)),
      coefficients_(std::move(coefficients)),
      offset_(offset) {
  if (centers_.rows() != coefficients_.size()) {
    throw std::invalid_argument("KernelExpansion: centers and coefficients differ in length");
  }
  if (!std::isfinite(offset_)) throw std::invalid_argument("KernelExpansion: non-finite offset");
}

double KernelExpansion::function_part(std::span<const double> x) const {
  const auto d = static_cast<Eigen::Index>(dim());
  if (static_cast<Eigen::Index>(x.size()) != d) {
    throw std::invalid_argument("KernelExpansion: dimension mismatch");
  }
  const double s2 = kernel_.sigma() * kernel_.sigma();
  double sum = 0.0;
  if (d == 1) {
    const double x0 = x[0];
    for (Eigen::Index i = 0; i < centers_.rows(); ++i) {
      const double diff = centers_(i, 0) - x0;
      sum += coefficients_[i] * std::exp(-s2 * diff * diff);
    }
    return sum;
  }
  for (Eigen::Index i = 0; i < centers_.rows(); ++i) {
    double d2 = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) {
      const double diff = centers_(i, k) - x[static_cast<std::size_t>(k)];
      d2 += diff * diff;
    }
    sum += coefficients_[i] * std::exp(-s2 * d2);
  }
  return sum;
}

double KernelExpansion::operator()(std::span<const double> x) const {
  return function_part(x) + offset_;
}

double KernelExpansion::rkhs_norm_squared() const {
  if (coefficients_.size() == 0) return 0.0;
  const Eigen::MatrixXd k = gram(kernel_, centers_);
  return std::max(0.0, coefficients_.dot(k * coefficients_));
}

double KernelExpansion::rkhs_norm() const { return std::sqrt(rkhs_norm_squared()); }

KernelExpansion KernelExpansion::with_offset(double offset) const {
  return KernelExpansion(kernel_, centers_, coefficients_, offset);
}

FieldFunction KernelExpansion::as_function() const {
  return [self = *this](std::span<const double> x) { return self(x); };
}

FieldFunction clip(FieldFunction f) {
  return [f = std::move(f)](std::span<const double> x) { return clip_value(f(x)); };
}

FieldFunction clip(const KernelExpansion& f) { return clip(f.as_function()); }

}  // namespace svmrates
