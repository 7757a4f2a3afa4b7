#pragma once

// Arm-selection rules compared in the experiments: Thompson sampling,
// TS-UCB(m), greedy, UCB, and sample-variance information-directed
// sampling. Every rule is a pure function of its inputs plus, where it
// randomizes, an explicitly passed random engine.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ratio_bandits/errors.hpp"
#include "ratio_bandits/scoring.hpp"

namespace ratio_bandits {

enum class PolicyKind { TS, TSUCB, GREEDY, UCB, IDS };

inline const char* to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::TS: return "TS";
    case PolicyKind::TSUCB: return "TSUCB";
    case PolicyKind::GREEDY: return "GREEDY";
    case PolicyKind::UCB: return "UCB";
    case PolicyKind::IDS: return "IDS";
  }
  return "?";
}

inline PolicyKind parse_policy_kind(const std::string& name) {
  std::string up;
  for (char c : name)
    if (c != '-' && c != '_') up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up == "TS") return PolicyKind::TS;
  if (up == "TSUCB") return PolicyKind::TSUCB;
  if (up == "GREEDY") return PolicyKind::GREEDY;
  if (up == "UCB" || up == "OFUL") return PolicyKind::UCB;
  if (up == "IDS") return PolicyKind::IDS;
  throw InvalidArgument("unknown policy kind '" + name + "'");
}

struct PolicyConfig {
  PolicyKind kind = PolicyKind::TS;
  std::size_t m = 1;             // TS-UCB posterior samples per step
  std::size_t ids_samples = 1000;

  void validate() const {
    if (m < 1) throw InvalidArgument("PolicyConfig: m must be >= 1");
    if (ids_samples < 2) throw InvalidArgument("PolicyConfig: ids_samples must be >= 2");
  }

  /// Posterior samples drawn per step.
  std::size_t samples_per_step() const noexcept {
    switch (kind) {
      case PolicyKind::TS: return 1;
      case PolicyKind::TSUCB: return m;
      case PolicyKind::IDS: return ids_samples;
      default: return 0;
    }
  }

  /// Display label, e.g. "TSUCB(100)"; doubles as the policy's identity.
  std::string label() const {
    switch (kind) {
      case PolicyKind::TSUCB: return "TSUCB(" + std::to_string(m) + ")";
      case PolicyKind::IDS: return "IDS(" + std::to_string(ids_samples) + ")";
      default: return to_string(kind);
    }
  }

  friend bool operator==(const PolicyConfig&, const PolicyConfig&) = default;
};

/// Sampled mean rewards: one row per posterior sample, one column per
/// available action.
class PosteriorSampleBatch {
 public:
  explicit PosteriorSampleBatch(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() < 1 || values_.cols() < 1)
      throw InvalidArgument("PosteriorSampleBatch: need at least one row and column");
    if (!values_.allFinite())
      throw InvalidArgument("PosteriorSampleBatch: non-finite entry");
  }

  std::size_t samples() const noexcept { return static_cast<std::size_t>(values_.rows()); }
  std::size_t actions() const noexcept { return static_cast<std::size_t>(values_.cols()); }
  const Eigen::MatrixXd& values() const noexcept { return values_; }

 private:
  Eigen::MatrixXd values_;
};

namespace detail {

template <class Vec>
std::size_t argmax_lowest(const Vec& v) {
  const auto n = static_cast<std::size_t>(v.size());
  if (n == 0) throw InvalidArgument("argmax over an empty vector");
  std::size_t best = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (v[static_cast<Eigen::Index>(i)] > v[static_cast<Eigen::Index>(best)]) best = i;
  return best;
}

}  // namespace detail

inline std::size_t ts_choose(const Eigen::Ref<const Eigen::VectorXd>& sample_row) {
  return detail::argmax_lowest(sample_row);
}

inline std::size_t greedy_choose(const Eigen::Ref<const Eigen::VectorXd>& posterior_means) {
  return detail::argmax_lowest(posterior_means);
}

inline std::size_t ucb_choose(std::span<const ConfidenceBounds> bounds) {
  if (bounds.empty()) throw InvalidArgument("ucb_choose: no actions");
  std::size_t best = 0;
  for (std::size_t a = 1; a < bounds.size(); ++a)
    if (bounds[a].ucb() > bounds[best].ucb()) best = a;
  return best;
}

/// f_tilde: the mean over samples of the best sampled reward.
inline TargetValue target_value(const PosteriorSampleBatch& batch) {
  const Eigen::VectorXd row_max = batch.values().rowwise().maxCoeff();
  return {row_max.mean(), batch.samples()};
}

inline std::size_t tsucb_choose(const PosteriorSampleBatch& batch,
                                std::span<const ConfidenceBounds> bounds) {
  if (batch.actions() != bounds.size())
    throw InvalidArgument("tsucb_choose: sample columns do not match bounds");
  return select_arm(target_value(batch).f_tilde, bounds);
}

/// Per-action regret estimate and variance-based information proxy.
struct IdsStats {
  Eigen::VectorXd delta;
  Eigen::VectorXd v;
};

inline IdsStats ids_stats(const PosteriorSampleBatch& batch) {
  if (batch.samples() < 2) throw InvalidArgument("ids_stats: need at least 2 samples");
  const Eigen::MatrixXd& s = batch.values();
  const Eigen::Index n = s.rows();
  const Eigen::Index K = s.cols();

  std::vector<std::size_t> best(static_cast<std::size_t>(n));
  Eigen::VectorXd count = Eigen::VectorXd::Zero(K);
  Eigen::MatrixXd cond_sum = Eigen::MatrixXd::Zero(K, K);  // row a*: sum of rows whose argmax is a*
  double opt_sum = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto a_star = static_cast<Eigen::Index>(detail::argmax_lowest(s.row(j)));
    best[static_cast<std::size_t>(j)] = static_cast<std::size_t>(a_star);
    count[a_star] += 1.0;
    cond_sum.row(a_star) += s.row(j);
    opt_sum += s(j, a_star);
  }
  const double nd = static_cast<double>(n);
  const Eigen::VectorXd mean = s.colwise().mean().transpose();
  const double opt = opt_sum / nd;

  IdsStats out{Eigen::VectorXd(K), Eigen::VectorXd::Zero(K)};
  for (Eigen::Index a = 0; a < K; ++a) out.delta[a] = std::max(0.0, opt - mean[a]);
  for (Eigen::Index a_star = 0; a_star < K; ++a_star) {
    if (count[a_star] == 0.0) continue;
    const double p = count[a_star] / nd;
    const Eigen::RowVectorXd cond_mean = cond_sum.row(a_star) / count[a_star];
    out.v += p * (cond_mean.transpose() - mean).array().square().matrix();
  }
  return out;
}

/// Two-point action distribution: play `first` with probability q,
/// `second` otherwise.
struct IdsDistribution {
  std::size_t first = 0;
  std::size_t second = 0;
  double q = 1.0;
  double ratio = 0.0;
};

/// (q da + (1-q) db)^2 / (q va + (1-q) vb), +inf on a zero denominator
/// with a positive numerator.
inline double information_ratio(double q, double da, double db, double va, double vb) {
  const double gap = q * da + (1.0 - q) * db;
  const double info = q * va + (1.0 - q) * vb;
  if (gap == 0.0) return 0.0;
  if (!(info > 0.0)) return std::numeric_limits<double>::infinity();
  return gap * gap / info;
}

namespace detail {

// Minimizer over q in [0,1] of the (convex) information ratio of a pair.
inline double ids_pair_weight(double da, double db, double va, double vb) {
  const double dd = da - db;
  const double dv = va - vb;
  auto best_of = [&](double q, double incumbent) {
    return information_ratio(q, da, db, va, vb) < information_ratio(incumbent, da, db, va, vb)
               ? q
               : incumbent;
  };
  double q = information_ratio(1.0, da, db, va, vb) <= information_ratio(0.0, da, db, va, vb)
                 ? 1.0
                 : 0.0;
  if (dd != 0.0 && dv != 0.0) {
    const double stationary = db / dd - 2.0 * vb / dv;
    if (std::isfinite(stationary)) {
      if (stationary > 0.0 && stationary < 1.0) q = best_of(stationary, q);
    } else {
      for (int i = 0; i <= 1000; ++i) q = best_of(i / 1000.0, q);
    }
  }
  return q;
}

}  // namespace detail

inline IdsDistribution ids_distribution(const Eigen::Ref<const Eigen::VectorXd>& delta,
                                        const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (delta.size() != v.size() || delta.size() == 0)
    throw InvalidArgument("ids_choose: delta and v must be non-empty and of equal length");
  if (!delta.allFinite() || !v.allFinite())
    throw InvalidArgument("ids_choose: non-finite input");
  if (v.minCoeff() < 0.0) throw InvalidArgument("ids_choose: negative variance term");
  if (delta.minCoeff() < 0.0) throw InvalidArgument("ids_choose: negative regret estimate");
  const Eigen::Index K = delta.size();

  for (Eigen::Index a = 0; a < K; ++a)
    if (delta[a] == 0.0) {
      const auto i = static_cast<std::size_t>(a);
      return {i, i, 1.0, 0.0};
    }
  if (v.maxCoeff() == 0.0) {
    Eigen::Index a = 0;
    delta.minCoeff(&a);
    const auto i = static_cast<std::size_t>(a);
    return {i, i, 1.0, std::numeric_limits<double>::infinity()};
  }

  IdsDistribution best{0, 0, 1.0, std::numeric_limits<double>::infinity()};
  for (Eigen::Index a = 0; a < K; ++a) {
    const double point = information_ratio(1.0, delta[a], delta[a], v[a], v[a]);
    if (point < best.ratio)
      best = {static_cast<std::size_t>(a), static_cast<std::size_t>(a), 1.0, point};
  }
  for (Eigen::Index a = 0; a < K; ++a)
    for (Eigen::Index b = a + 1; b < K; ++b) {
      const double q = detail::ids_pair_weight(delta[a], delta[b], v[a], v[b]);
      const double r = information_ratio(q, delta[a], delta[b], v[a], v[b]);
      if (r < best.ratio)
        best = {static_cast<std::size_t>(a), static_cast<std::size_t>(b), q, r};
    }
  return best;
}

template <class Rng>
std::size_t ids_choose(const Eigen::Ref<const Eigen::VectorXd>& delta,
                       const Eigen::Ref<const Eigen::VectorXd>& v, Rng& rng) {
  const IdsDistribution dist = ids_distribution(delta, v);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return u(rng) < dist.q ? dist.first : dist.second;
}

}  // namespace ratio_bandits
