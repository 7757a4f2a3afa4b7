#pragma once

// Shared random-instance generators for the property tests.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "ratio_bandits/scoring.hpp"

namespace ratio_bandits::testing {

inline std::vector<ConfidenceBounds> random_bounds(std::mt19937_64& rng, std::size_t K) {
  std::uniform_real_distribution<double> mu(-1.0, 1.0);
  std::uniform_real_distribution<double> rad(0.0, 1.0);
  std::vector<ConfidenceBounds> out;
  for (std::size_t a = 0; a < K; ++a) {
    double r = rad(rng);
    while (r == 0.0) r = rad(rng);
    out.emplace_back(mu(rng), r);
  }
  return out;
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t K) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(K);
  double total = 0.0;
  for (auto& x : w) total += (x = e(rng));
  for (auto& x : w) x /= total;
  // Renormalise the last entry so the sum is 1 to within rounding.
  double partial = 0.0;
  for (std::size_t i = 0; i + 1 < K; ++i) partial += w[i];
  w.back() = std::max(0.0, 1.0 - partial);
  return w;
}

inline Eigen::VectorXd random_gaussian(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> z(0.0, scale);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = z(rng);
  return v;
}

inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double denom = std::max(b.norm(), 1e-300);
  return (a - b).norm() / denom;
}

}  // namespace ratio_bandits::testing
