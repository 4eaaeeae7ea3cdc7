#pragma once

// Brute-force covering number of the empirical unit ball of H_σ for tiny n:
// a greedy ε-net over a dense sample of {Kc/√n : cᵀKc <= 1}. Built from the
// Gram matrix through a Cholesky factor, without the eigenvalue route.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Cholesky>

#include "svmrates/kernel.hpp"

namespace svmrates::testing {

inline std::size_t greedy_cover(const PointMatrix& pts, double sigma, double eps,
                                std::uint64_t seed, int samples = 20000) {
  const Eigen::MatrixXd K = gram(GaussianKernel(sigma), pts);
  const auto n = K.rows();
  // With K = LLᵀ, the set {L u/√n : |u| <= 1} is isometric to the ball image.
  const Eigen::MatrixXd L =
      Eigen::LLT<Eigen::MatrixXd>(K + 1e-12 * Eigen::MatrixXd::Identity(n, n)).matrixL();
  RandomStream rng(seed);
  std::vector<Eigen::VectorXd> cloud;
  cloud.reserve(static_cast<std::size_t>(samples));
  for (int s = 0; s < samples; ++s) {
    Eigen::VectorXd u(n);
    for (Eigen::Index i = 0; i < n; ++i) u(i) = rng.normal();
    // A quarter of the cloud sits on the boundary sphere.
    const double r = s % 4 == 0 ? 1.0 : std::pow(rng.uniform(), 1.0 / static_cast<double>(n));
    u *= r / u.norm();
    cloud.push_back(L * u / std::sqrt(static_cast<double>(n)));
  }
  std::vector<bool> covered(cloud.size(), false);
  std::size_t centers = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (covered[i]) continue;
    ++centers;
    for (std::size_t j = i; j < cloud.size(); ++j) {
      if (!covered[j] && (cloud[j] - cloud[i]).norm() <= eps) covered[j] = true;
    }
  }
  return centers;
}

}  // namespace svmrates::testing
