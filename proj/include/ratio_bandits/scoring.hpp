#pragma once

// TS-UCB scoring: the ratio of the sampled optimal-reward gap to the
// confidence radius, its argmin, the randomized extension and the
// equivalent dynamically tuned UCB multiplier.

#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "ratio_bandits/errors.hpp"

namespace ratio_bandits {

/// Point estimate and confidence half-width for one action.
class ConfidenceBounds {
 public:
  ConfidenceBounds(double mu_hat, double radius)
      : mu_hat_(mu_hat), radius_(radius) {
    if (!std::isfinite(mu_hat) || !std::isfinite(radius))
      throw InvalidArgument("ConfidenceBounds: non-finite input");
    if (!(radius > 0.0))
      throw InvalidArgument("ConfidenceBounds: radius must be > 0, got " +
                            std::to_string(radius));
  }

  double mu_hat() const noexcept { return mu_hat_; }
  double radius() const noexcept { return radius_; }
  double ucb() const noexcept { return mu_hat_ + radius_; }
  double lcb() const noexcept { return mu_hat_ - radius_; }

  friend bool operator==(const ConfidenceBounds&,
                         const ConfidenceBounds&) = default;

 private:
  double mu_hat_;
  double radius_;
};

/// Average of the best-action mean reward over m posterior samples.
struct TargetValue {
  double f_tilde = 0.0;
  std::size_t m = 1;
};

namespace detail {

inline void require_finite(double x, const char* what) {
  if (!std::isfinite(x))
    throw InvalidArgument(std::string(what) + ": non-finite input");
}

inline void require_nonempty(std::span<const ConfidenceBounds> bounds,
                             const char* what) {
  if (bounds.empty()) throw InvalidArgument(std::string(what) + ": no actions");
}

}  // namespace detail

inline double psi(double f_tilde, const ConfidenceBounds& bounds) {
  detail::require_finite(f_tilde, "psi");
  return (f_tilde - bounds.mu_hat()) / bounds.radius();
}

/// Index of the action with the smallest ratio; ties go to the lowest index.
inline std::size_t select_arm(double f_tilde,
                              std::span<const ConfidenceBounds> bounds) {
  detail::require_nonempty(bounds, "select_arm");
  detail::require_finite(f_tilde, "select_arm");
  std::size_t best = 0;
  double best_score = psi(f_tilde, bounds[0]);
  for (std::size_t a = 1; a < bounds.size(); ++a) {
    const double score = psi(f_tilde, bounds[a]);
    if (score < best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

/// Ratio of a randomized action: both numerator and denominator are
/// averaged under `weights` before dividing.
inline double psi_randomized(double f_tilde,
                             std::span<const ConfidenceBounds> bounds,
                             std::span<const double> weights) {
  detail::require_nonempty(bounds, "psi_randomized");
  detail::require_finite(f_tilde, "psi_randomized");
  if (weights.size() != bounds.size())
    throw InvalidArgument("psi_randomized: weights/bounds length mismatch");
  double total = 0.0;
  double mean = 0.0;
  double radius = 0.0;
  for (std::size_t a = 0; a < bounds.size(); ++a) {
    const double w = weights[a];
    if (!std::isfinite(w) || w < 0.0)
      throw InvalidArgument("psi_randomized: weights must be non-negative");
    total += w;
    mean += w * bounds[a].mu_hat();
    radius += w * bounds[a].radius();
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw InvalidArgument("psi_randomized: weights must sum to 1");
  return (f_tilde - mean) / radius;
}

/// Smallest multiplier alpha such that some action's mu_hat + alpha * radius
/// reaches f_tilde. Equals the minimal ratio; may be negative.
inline double dynamic_alpha(double f_tilde,
                            std::span<const ConfidenceBounds> bounds) {
  return psi(f_tilde, bounds[select_arm(f_tilde, bounds)]);
}

}  // namespace ratio_bandits
