#pragma once

#include <span>

#include <Eigen/Core>

#include "svmrates/distributions.hpp"
#include "svmrates/numeric.hpp"

namespace svmrates {

// k(x, x') = exp(-sigma² |x - x'|²).
//
// sigma is the inverse width, not a bandwidth: a library that takes
// gamma = 1/(2 s²) or a width s corresponds to sigma = sqrt(gamma) = 1/(sqrt(2) s).
// Large sigma means a narrow kernel.
class GaussianKernel {
 public:
  explicit GaussianKernel(double sigma);

  double sigma() const noexcept { return sigma_; }
  double operator()(std::span<const double> x, std::span<const double> y) const;

  bool operator==(const GaussianKernel&) const = default;

 private:
  double sigma_;
};

Eigen::MatrixXd gram(const GaussianKernel& kernel, const PointMatrix& points);

// Cross-kernel matrix K_ij = k(a_i, b_j).
Eigen::MatrixXd cross_gram(const GaussianKernel& kernel, const PointMatrix& a,
                           const PointMatrix& b);

// f(x) = Σ c_i k(x_i, x) + offset.
class KernelExpansion {
 public:
  KernelExpansion(GaussianKernel kernel, PointMatrix centers, Eigen::VectorXd coefficients,
                  double offset = 0.0);

  const GaussianKernel& kernel() const noexcept { return kernel_; }
  const PointMatrix& centers() const noexcept { return centers_; }
  const Eigen::VectorXd& coefficients() const noexcept { return coefficients_; }
  double offset() const noexcept { return offset_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(coefficients_.size()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(centers_.cols()); }

  double operator()(std::span<const double> x) const;
  // Value without the offset term.
  double function_part(std::span<const double> x) const;

  // sqrt(cᵀKc); the offset is not penalized and does not enter.
  double rkhs_norm() const;
  double rkhs_norm_squared() const;

  KernelExpansion with_offset(double offset) const;
  FieldFunction as_function() const;

 private:
  GaussianKernel kernel_;
  PointMatrix centers_;
  Eigen::VectorXd coefficients_;
  double offset_;
};

inline double clip_value(double v) noexcept { return v < -1.0 ? -1.0 : (v > 1.0 ? 1.0 : v); }

// Pointwise truncation to [-1, 1].
FieldFunction clip(FieldFunction f);
FieldFunction clip(const KernelExpansion& f);

}  // namespace svmrates
