#pragma once

// Linear-bandit confidence sets: regularized least squares with a
// Cholesky factor of V = I + sum x x' kept current by rank-one updates,
// the confidence-set width sqrt(beta_t), and closed-form per-action bounds.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "ratio_bandits/errors.hpp"
#include "ratio_bandits/scoring.hpp"

namespace ratio_bandits {

using ActionVector = Eigen::VectorXd;

/// Constants entering sqrt(beta_t): sub-Gaussian scale r, parameter-norm
/// bound S, action-norm bound L, horizon T.
struct LinearConstants {
  double r = 1.0;
  double S = 1.0;
  double L = 1.0;
  std::uint64_t T = 1;

  void validate() const {
    if (!(r >= 1.0)) throw InvalidArgument("LinearConstants: r must be >= 1");
    if (!(S >= 0.0)) throw InvalidArgument("LinearConstants: S must be >= 0");
    if (!(L > 0.0)) throw InvalidArgument("LinearConstants: L must be > 0");
    if (T == 0) throw InvalidArgument("LinearConstants: T must be >= 1");
  }
};

/// sqrt(beta_t) = r sqrt(d ln(T^2 (1 + t L))) + S.
inline double beta_sqrt(const LinearConstants& c, std::size_t dim,
                        std::uint64_t t) {
  c.validate();
  const double T = static_cast<double>(c.T);
  const double inner =
      std::log(T * T * (1.0 + static_cast<double>(t) * c.L));
  return c.r * std::sqrt(static_cast<double>(dim) * inner) + c.S;
}

class LinearState {
 public:
  LinearState(std::size_t dim, LinearConstants constants)
      : constants_(constants),
        gram_(Eigen::MatrixXd::Identity(dim, dim)),
        factor_(gram_),
        cross_(Eigen::VectorXd::Zero(dim)),
        estimate_(Eigen::VectorXd::Zero(dim)) {
    if (dim == 0) throw InvalidArgument("LinearState: dimension must be >= 1");
    constants_.validate();
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(cross_.size()); }
  std::uint64_t steps() const noexcept { return steps_; }
  const LinearConstants& constants() const noexcept { return constants_; }

  /// Dense V, accumulated alongside the factor.
  const Eigen::MatrixXd& gram() const noexcept { return gram_; }
  /// L L' reconstructed from the maintained Cholesky factor.
  Eigen::MatrixXd factored_gram() const { return factor_.reconstructedMatrix(); }
  const Eigen::LLT<Eigen::MatrixXd>& factor() const noexcept { return factor_; }
  const Eigen::VectorXd& cross_product() const noexcept { return cross_; }
  const Eigen::VectorXd& estimate() const noexcept { return estimate_; }

  void update(const ActionVector& x, double y) {
    check_dim(x, "lin_update");
    if (!std::isfinite(y)) throw InvalidArgument("lin_update: non-finite reward");
    gram_.noalias() += x * x.transpose();
    factor_.rankUpdate(x, 1.0);
    if (factor_.info() != Eigen::Success)
      throw NumericError("lin_update: rank-one Cholesky update failed");
    cross_.noalias() += y * x;
    ++steps_;
    estimate_ = factor_.solve(cross_);
#ifdef RATIO_BANDITS_DEBUG_CHECKS
    if (steps_ % 256 == 0) verify_factor();
#endif
  }

  /// ||x||_{V^{-1}} = ||L^{-1} x|| for V = L L'.
  double weighted_norm(const ActionVector& x) const {
    check_dim(x, "weighted_norm");
    return factor_.matrixL().solve(x).norm();
  }

  double predicted_mean(const ActionVector& x) const {
    check_dim(x, "predicted_mean");
    return x.dot(estimate_);
  }

  /// Throws NumericError if the factor drifted from the dense V.
  void verify_factor(double tolerance = 1e-8) const {
    const double err = (factored_gram() - gram_).norm() / gram_.norm();
    if (!(err <= tolerance))
      throw NumericError("LinearState: Cholesky factor drifted, relative error " +
                         std::to_string(err));
  }

 private:
  void check_dim(const ActionVector& x, const char* what) const {
    if (x.size() != cross_.size())
      throw InvalidArgument(std::string(what) + ": expected dimension " +
                            std::to_string(cross_.size()) + ", got " +
                            std::to_string(x.size()));
    if (!x.allFinite()) throw InvalidArgument(std::string(what) + ": non-finite vector");
  }

  LinearConstants constants_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  Eigen::VectorXd cross_;
  Eigen::VectorXd estimate_;
  std::uint64_t steps_ = 0;
};

inline void lin_update(LinearState& state, const ActionVector& x, double y) {
  state.update(x, y);
}

inline double beta_sqrt(const LinearState& state) {
  return beta_sqrt(state.constants(), state.dim(), state.steps());
}

inline std::vector<ConfidenceBounds> lin_bounds(
    const LinearState& state, std::span<const ActionVector> actions) {
  if (actions.empty()) throw InvalidArgument("lin_bounds: no actions");
  const double width = beta_sqrt(state);
  std::vector<ConfidenceBounds> out;
  out.reserve(actions.size());
  for (const auto& x : actions) {
    const double norm = state.weighted_norm(x);
    if (!(norm > 0.0)) throw InvalidArgument("lin_bounds: zero action vector");
    out.emplace_back(state.predicted_mean(x), width * norm);
  }
  return out;
}

/// TS-UCB for the linear model; sqrt(beta_t) cancels out of the ratio.
inline std::size_t lin_select(double f_tilde, const LinearState& state,
                              std::span<const ActionVector> actions) {
  if (actions.empty()) throw InvalidArgument("lin_select: no actions");
  if (!std::isfinite(f_tilde)) throw InvalidArgument("lin_select: non-finite f_tilde");
  std::size_t best = 0;
  double best_score = 0.0;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    const double norm = state.weighted_norm(actions[a]);
    if (!(norm > 0.0)) throw InvalidArgument("lin_select: zero action vector");
    const double score = (f_tilde - state.predicted_mean(actions[a])) / norm;
    if (a == 0 || score < best_score) {
      best_score = score;
      best = a;
    }
  }
  return best;
}

/// Contextual-to-linear embedding: arm k gets the context in block k.
inline std::vector<ActionVector> embed_contextual(const Eigen::VectorXd& context,
                                                  std::size_t num_arms) {
  if (num_arms == 0) throw InvalidArgument("embed_contextual: K must be >= 1");
  const Eigen::Index d = context.size();
  std::vector<ActionVector> out;
  out.reserve(num_arms);
  for (std::size_t k = 0; k < num_arms; ++k) {
    ActionVector x = ActionVector::Zero(d * static_cast<Eigen::Index>(num_arms));
    x.segment(static_cast<Eigen::Index>(k) * d, d) = context;
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace ratio_bandits
