#pragma once

// Exact conjugate posteriors for Bayesian linear regression:
//   * Gaussian prior, known noise variance;
//   * Normal-Inverse-Gamma prior, unknown noise variance.
// Both keep a Cholesky factor of the posterior precision, so sampling and
// predictive variances need only triangular solves.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include "ratio_bandits/errors.hpp"

namespace ratio_bandits {

namespace detail {

inline void require_spd(const Eigen::LLT<Eigen::MatrixXd>& llt, const char* what) {
  if (llt.info() != Eigen::Success)
    throw NumericError(std::string(what) + ": matrix is not positive definite");
  const auto diag = llt.matrixLLT().diagonal();
  if (!(diag.minCoeff() > 0.0) || !diag.allFinite())
    throw NumericError(std::string(what) + ": non-positive Cholesky pivot");
}

template <class Rng>
Eigen::VectorXd standard_normal(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> z(0.0, 1.0);
  Eigen::VectorXd out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = z(rng);
  return out;
}

}  // namespace detail

/// theta ~ N(mean, precision^{-1}); y = <x, theta> + N(0, noise_variance).
class GaussianLinearPosterior {
 public:
  GaussianLinearPosterior(Eigen::VectorXd prior_mean,
                          const Eigen::MatrixXd& prior_precision,
                          double noise_variance)
      : noise_variance_(noise_variance),
        precision_(prior_precision),
        factor_(prior_precision),
        shift_(prior_precision * prior_mean),
        mean_(std::move(prior_mean)) {
    if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
      throw InvalidArgument("GaussianLinearPosterior: noise variance must be > 0");
    if (prior_precision.rows() != mean_.size() || prior_precision.cols() != mean_.size())
      throw InvalidArgument("GaussianLinearPosterior: prior dimension mismatch");
    detail::require_spd(factor_, "GaussianLinearPosterior");
  }

  /// N(0, prior_variance * I) prior.
  static GaussianLinearPosterior isotropic(std::size_t dim, double prior_variance,
                                           double noise_variance) {
    const auto d = static_cast<Eigen::Index>(dim);
    return {Eigen::VectorXd::Zero(d),
            Eigen::MatrixXd::Identity(d, d) / prior_variance, noise_variance};
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  double noise_variance() const noexcept { return noise_variance_; }
  std::uint64_t observations() const noexcept { return count_; }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& precision() const noexcept { return precision_; }
  const Eigen::LLT<Eigen::MatrixXd>& precision_factor() const noexcept { return factor_; }
  Eigen::MatrixXd covariance() const {
    return factor_.solve(Eigen::MatrixXd::Identity(mean_.size(), mean_.size()));
  }

  void update(const Eigen::VectorXd& x, double y) {
    if (x.size() != mean_.size())
      throw InvalidArgument("gauss_update: dimension mismatch");
    if (!x.allFinite() || !std::isfinite(y))
      throw InvalidArgument("gauss_update: non-finite observation");
    precision_.noalias() += (x * x.transpose()) / noise_variance_;
    factor_.rankUpdate(x, 1.0 / noise_variance_);
    detail::require_spd(factor_, "gauss_update");
    shift_.noalias() += (y / noise_variance_) * x;
    mean_ = factor_.solve(shift_);
    ++count_;
  }

  /// Marginal posterior of <x, theta>: (mean, variance).
  std::pair<double, double> predictive(const Eigen::VectorXd& x) const {
    if (x.size() != mean_.size())
      throw InvalidArgument("GaussianLinearPosterior::predictive: dimension mismatch");
    return {x.dot(mean_), factor_.matrixL().solve(x).squaredNorm()};
  }

 private:
  double noise_variance_;
  Eigen::MatrixXd precision_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  Eigen::VectorXd shift_;  // prior_precision * prior_mean + X'y / sigma^2
  Eigen::VectorXd mean_;
  std::uint64_t count_ = 0;
};

inline void gauss_update(GaussianLinearPosterior& post, const Eigen::VectorXd& x,
                         double y) {
  post.update(x, y);
}

/// mean + L'^{-1} z, where precision = L L', so the draw has covariance
/// precision^{-1}.
template <class Rng>
Eigen::VectorXd gauss_sample(const GaussianLinearPosterior& post, Rng& rng) {
  const Eigen::VectorXd z = detail::standard_normal(post.mean().size(), rng);
  return post.mean() + post.precision_factor().matrixU().solve(z);
}

/// sigma^2 ~ IG(a, b); beta | sigma^2 ~ N(mu, sigma^2 Sigma) with
/// Sigma^{-1} = Lambda_0 + X'X.
class NIGPosterior {
 public:
  NIGPosterior(Eigen::VectorXd prior_mean, const Eigen::MatrixXd& prior_precision,
               double prior_shape, double prior_scale)
      : prior_mean_(std::move(prior_mean)),
        prior_precision_(prior_precision),
        prior_shape_(prior_shape),
        prior_scale_(prior_scale),
        precision_(prior_precision),
        factor_(prior_precision),
        shift_(prior_precision * prior_mean_),
        mean_(prior_mean_) {
    const auto d = prior_mean_.size();
    if (prior_precision.rows() != d || prior_precision.cols() != d)
      throw InvalidArgument("NIGPosterior: prior dimension mismatch");
    if (!(prior_shape > 0.0) || !(prior_scale > 0.0))
      throw InvalidArgument("NIGPosterior: a0 and b0 must be > 0");
    detail::require_spd(factor_, "NIGPosterior");
    prior_quad_ = prior_mean_.dot(prior_precision_ * prior_mean_);
  }

  /// mu0 = 0, Lambda0 = precision_scale * I.
  static NIGPosterior isotropic(std::size_t dim, double precision_scale,
                                double prior_shape, double prior_scale) {
    const auto d = static_cast<Eigen::Index>(dim);
    return {Eigen::VectorXd::Zero(d), precision_scale * Eigen::MatrixXd::Identity(d, d),
            prior_shape, prior_scale};
  }

  std::size_t dim() const noexcept { return static_cast<std::size_t>(mean_.size()); }
  std::uint64_t observations() const noexcept { return count_; }
  const Eigen::VectorXd& mean() const noexcept { return mean_; }
  const Eigen::MatrixXd& precision() const noexcept { return precision_; }
  const Eigen::LLT<Eigen::MatrixXd>& precision_factor() const noexcept { return factor_; }
  Eigen::MatrixXd covariance() const {
    return factor_.solve(Eigen::MatrixXd::Identity(mean_.size(), mean_.size()));
  }
  double shape() const noexcept {
    return prior_shape_ + 0.5 * static_cast<double>(count_);
  }
  double scale() const noexcept {
    return prior_scale_ + 0.5 * (sum_sq_ + prior_quad_ - shift_.dot(mean_));
  }

  void update(const Eigen::VectorXd& x, double y) {
    if (x.size() != mean_.size()) throw InvalidArgument("nig_update: dimension mismatch");
    if (!x.allFinite() || !std::isfinite(y))
      throw InvalidArgument("nig_update: non-finite observation");
    precision_.noalias() += x * x.transpose();
    factor_.rankUpdate(x, 1.0);
    detail::require_spd(factor_, "nig_update");
    shift_.noalias() += y * x;
    sum_sq_ += y * y;
    ++count_;
    mean_ = factor_.solve(shift_);
  }

  /// Applies a block of rows at once; rows of `X` pair with entries of `Y`.
  void update(const Eigen::MatrixXd& X, const Eigen::VectorXd& Y) {
    if (X.cols() != mean_.size() || X.rows() != Y.size())
      throw InvalidArgument("nig_update: block dimension mismatch");
    if (X.rows() == 0) return;
    if (!X.allFinite() || !Y.allFinite())
      throw InvalidArgument("nig_update: non-finite observation");
    precision_.noalias() += X.transpose() * X;
    factor_.compute(precision_);
    detail::require_spd(factor_, "nig_update");
    shift_.noalias() += X.transpose() * Y;
    sum_sq_ += Y.squaredNorm();
    count_ += static_cast<std::uint64_t>(X.rows());
    mean_ = factor_.solve(shift_);
  }

  /// <x, mean> and x' Sigma x (the latter still to be scaled by sigma^2).
  std::pair<double, double> predictive(const Eigen::VectorXd& x) const {
    if (x.size() != mean_.size())
      throw InvalidArgument("NIGPosterior::predictive: dimension mismatch");
    return {x.dot(mean_), factor_.matrixL().solve(x).squaredNorm()};
  }

  /// sigma^2 ~ IG(shape, scale), as the reciprocal of a Gamma(shape, rate=scale).
  template <class Rng>
  double sample_noise_variance(Rng& rng) const {
    const double b = scale();
    if (!(b > 0.0)) throw NumericError("NIGPosterior: non-positive IG scale");
    std::gamma_distribution<double> gamma(shape(), 1.0 / b);
    return 1.0 / gamma(rng);
  }

 private:
  Eigen::VectorXd prior_mean_;
  Eigen::MatrixXd prior_precision_;
  double prior_shape_;
  double prior_scale_;
  double prior_quad_ = 0.0;
  Eigen::MatrixXd precision_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
  Eigen::VectorXd shift_;  // Lambda0 mu0 + X'Y
  Eigen::VectorXd mean_;
  double sum_sq_ = 0.0;
  std::uint64_t count_ = 0;
};

inline void nig_update(NIGPosterior& post, const Eigen::VectorXd& x, double y) {
  post.update(x, y);
}

inline void nig_update(NIGPosterior& post, const Eigen::MatrixXd& X,
                       const Eigen::VectorXd& Y) {
  post.update(X, Y);
}

struct NIGSample {
  double noise_variance;
  Eigen::VectorXd coefficients;
};

template <class Rng>
NIGSample nig_sample(const NIGPosterior& post, Rng& rng) {
  const double s2 = post.sample_noise_variance(rng);
  const Eigen::VectorXd z = detail::standard_normal(post.mean().size(), rng);
  return {s2, post.mean() + std::sqrt(s2) * post.precision_factor().matrixU().solve(z)};
}

}  // namespace ratio_bandits
