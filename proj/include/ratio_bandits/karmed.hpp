#pragma once

// K-armed bandit statistics: pull counts, empirical means, Hoeffding-style
// confidence radii sqrt(3 ln T / N(a)), and a Beta posterior per arm.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ratio_bandits/errors.hpp"
#include "ratio_bandits/scoring.hpp"

namespace ratio_bandits {

class KArmStats {
 public:
  KArmStats(std::size_t num_arms, std::uint64_t horizon)
      : pulls_(num_arms, 0), sums_(num_arms, 0.0), horizon_(horizon) {
    if (num_arms == 0) throw InvalidArgument("KArmStats: need at least one arm");
    if (horizon == 0) throw InvalidArgument("KArmStats: horizon must be >= 1");
  }

  std::size_t num_arms() const noexcept { return pulls_.size(); }
  std::uint64_t horizon() const noexcept { return horizon_; }
  std::uint64_t pulls(std::size_t arm) const { return pulls_.at(arm); }
  double reward_sum(std::size_t arm) const { return sums_.at(arm); }

  double mean(std::size_t arm) const {
    if (pulls_.at(arm) == 0)
      throw PreconditionError("KArmStats: arm " + std::to_string(arm) +
                              " has never been pulled");
    return sums_[arm] / static_cast<double>(pulls_[arm]);
  }

  bool all_pulled() const noexcept {
    for (auto n : pulls_)
      if (n == 0) return false;
    return true;
  }

  void record(std::size_t arm, double reward) {
    pulls_.at(arm) += 1;
    sums_[arm] += reward;
  }

 private:
  std::vector<std::uint64_t> pulls_;
  std::vector<double> sums_;
  std::uint64_t horizon_;
};

/// Independent Beta(alpha, beta) posterior per arm, uniform prior.
class BetaPosterior {
 public:
  explicit BetaPosterior(std::size_t num_arms)
      : alpha_(num_arms, 1.0), beta_(num_arms, 1.0) {}

  std::size_t num_arms() const noexcept { return alpha_.size(); }
  double alpha(std::size_t arm) const { return alpha_.at(arm); }
  double beta(std::size_t arm) const { return beta_.at(arm); }
  double mean(std::size_t arm) const {
    return alpha_.at(arm) / (alpha_[arm] + beta_[arm]);
  }

  // Fractional update: a reward r in [0,1] counts as r successes and
  // 1 - r failures.
  void record(std::size_t arm, double reward) {
    alpha_.at(arm) += reward;
    beta_.at(arm) += 1.0 - reward;
  }

  template <class Rng>
  double sample(std::size_t arm, Rng& rng) const {
    std::gamma_distribution<double> ga(alpha_.at(arm), 1.0);
    std::gamma_distribution<double> gb(beta_[arm], 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x / (x + y);
  }

 private:
  std::vector<double> alpha_;
  std::vector<double> beta_;
};

inline void karm_update(KArmStats& stats, BetaPosterior& posterior,
                        std::size_t arm, double reward) {
  if (arm >= stats.num_arms() || arm >= posterior.num_arms())
    throw InvalidArgument("karm_update: arm index out of range");
  if (!(reward >= 0.0 && reward <= 1.0))
    throw InvalidArgument("karm_update: reward must lie in [0, 1]");
  stats.record(arm, reward);
  posterior.record(arm, reward);
}

inline double karm_radius(std::uint64_t pulls, std::uint64_t horizon) {
  return std::sqrt(3.0 * std::log(static_cast<double>(horizon)) /
                   static_cast<double>(pulls));
}

inline std::vector<ConfidenceBounds> karm_bounds(const KArmStats& stats) {
  std::vector<ConfidenceBounds> out;
  out.reserve(stats.num_arms());
  for (std::size_t a = 0; a < stats.num_arms(); ++a) {
    if (stats.pulls(a) == 0)
      throw PreconditionError("karm_bounds: arm " + std::to_string(a) +
                              " has never been pulled");
    out.emplace_back(stats.mean(a), karm_radius(stats.pulls(a), stats.horizon()));
  }
  return out;
}

/// TS-UCB for the K-armed model without the horizon-dependent constant:
/// argmin over arms of sqrt(N(a)) * (f_tilde - mean(a)).
inline std::size_t karm_score(double f_tilde, const KArmStats& stats) {
  if (!std::isfinite(f_tilde)) throw InvalidArgument("karm_score: non-finite f_tilde");
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t a = 0; a < stats.num_arms(); ++a) {
    if (stats.pulls(a) == 0)
      throw PreconditionError("karm_score: arm " + std::to_string(a) +
                              " has never been pulled");
    const double score = std::sqrt(static_cast<double>(stats.pulls(a))) *
                         (f_tilde - stats.mean(a));
    if (a == 0 || score < best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

}  // namespace ratio_bandits
