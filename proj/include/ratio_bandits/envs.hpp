#pragma once

// Synthetic environments: Bernoulli K-armed bandits and the linear
// contextual model reward = <beta_k, X_t> + N(0, sigma^2) with
// beta_k ~ N(0, I_d) and X_t ~ N(0, I_d / d). All randomness is addressed
// through a CounterStream so paired policies see identical potential
// outcomes.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "ratio_bandits/errors.hpp"
#include "ratio_bandits/random.hpp"

namespace ratio_bandits {

enum class EnvKind { KArmed, LinearContextual };

inline const char* to_string(EnvKind kind) {
  return kind == EnvKind::KArmed ? "karmed" : "linear_contextual";
}

inline EnvKind parse_env_kind(const std::string& name) {
  if (name == "karmed" || name == "k_armed") return EnvKind::KArmed;
  if (name == "linear_contextual" || name == "linctx") return EnvKind::LinearContextual;
  throw ConfigError("env.kind", "unknown environment kind '" + name + "'");
}

enum class PosteriorKind { Gaussian, NIG };

inline const char* to_string(PosteriorKind kind) {
  return kind == PosteriorKind::Gaussian ? "gaussian" : "nig";
}

inline PosteriorKind parse_posterior_kind(const std::string& name) {
  if (name == "gaussian") return PosteriorKind::Gaussian;
  if (name == "nig") return PosteriorKind::NIG;
  throw ConfigError("env.posterior", "unknown posterior kind '" + name + "'");
}

/// Normal-Inverse-Gamma prior used when the agent does not know sigma.
struct NIGPrior {
  double precision_scale = 4.0;  // Lambda0 = precision_scale * I, mu0 = 0
  double shape = 6.0;
  double scale = 6.0;
  friend bool operator==(const NIGPrior&, const NIGPrior&) = default;
};

/// One environment cell of an experiment grid.
struct EnvConfig {
  EnvKind kind = EnvKind::LinearContextual;
  std::size_t d = 10;   // unused for K-armed
  std::size_t K = 2;
  double sigma = 1.0;   // unused for K-armed
  std::vector<double> fixed_means;  // K-armed only; empty = draw Uniform[0,1]^K
  PosteriorKind posterior = PosteriorKind::Gaussian;
  NIGPrior nig_prior;

  void validate() const {
    if (K < 2) throw ConfigError("env.K", "need K >= 2 arms");
    if (kind == EnvKind::LinearContextual) {
      if (d < 1) throw ConfigError("env.d", "dimension must be >= 1");
      if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw ConfigError("env.sigma", "noise level must be > 0");
      if (!(nig_prior.precision_scale > 0.0) || !(nig_prior.shape > 0.0) ||
          !(nig_prior.scale > 0.0))
        throw ConfigError("env.nig_prior", "prior parameters must be > 0");
    } else if (!fixed_means.empty()) {
      if (fixed_means.size() != K)
        throw ConfigError("env.means", "need exactly K fixed means");
      for (double m : fixed_means)
        if (!(m >= 0.0 && m <= 1.0))
          throw ConfigError("env.means", "Bernoulli means must lie in [0, 1]");
    }
  }

  /// Columns written to the results files (K-armed rows report d = sigma = 0).
  std::size_t reported_d() const noexcept { return kind == EnvKind::KArmed ? 0 : d; }
  double reported_sigma() const noexcept { return kind == EnvKind::KArmed ? 0.0 : sigma; }

  friend bool operator==(const EnvConfig&, const EnvConfig&) = default;
};

/// Seed of run `run_id` in a cell; independent of the horizon and of the
/// policy, so every policy in the cell is paired on the same instance.
inline std::uint64_t env_seed(std::uint64_t master_seed, const EnvConfig& env,
                              std::uint64_t run_id) {
  return mix_seed(master_seed, static_cast<std::uint64_t>(env.kind), env.reported_d(),
                  env.K, std::bit_cast<std::uint64_t>(env.reported_sigma()), run_id);
}

struct StepOutcome {
  double reward;
  double regret;
};

class KArmEnv {
 public:
  KArmEnv(const EnvConfig& config, std::uint64_t seed) : stream_(seed) {
    config.validate();
    if (config.kind != EnvKind::KArmed)
      throw ConfigError("env.kind", "KArmEnv requires a K-armed config");
    means_ = config.fixed_means;
    if (means_.empty()) {
      means_.resize(config.K);
      for (std::size_t a = 0; a < config.K; ++a)
        means_[a] = stream_.uniform(StreamTag::Parameter, a, 0);
    }
    best_ = *std::max_element(means_.begin(), means_.end());
  }

  std::size_t num_arms() const noexcept { return means_.size(); }
  const std::vector<double>& means() const noexcept { return means_; }
  std::uint64_t seed() const noexcept { return stream_.key(); }

  double mean_reward(std::uint64_t /*t*/, std::size_t arm) const { return means_.at(arm); }

  /// Bernoulli(theta_arm) outcome addressed by (t, arm).
  double reward(std::uint64_t t, std::size_t arm) const {
    return stream_.uniform(StreamTag::Noise, t, arm) < means_.at(arm) ? 1.0 : 0.0;
  }

  double regret(std::uint64_t /*t*/, std::size_t arm) const { return best_ - means_.at(arm); }

 private:
  CounterStream stream_;
  std::vector<double> means_;
  double best_ = 0.0;
};

class LinCtxEnv {
 public:
  LinCtxEnv(const EnvConfig& config, std::uint64_t seed)
      : stream_(seed), sigma_(config.sigma) {
    config.validate();
    if (config.kind != EnvKind::LinearContextual)
      throw ConfigError("env.kind", "LinCtxEnv requires a linear contextual config");
    const auto K = static_cast<Eigen::Index>(config.K);
    const auto d = static_cast<Eigen::Index>(config.d);
    params_.resize(K, d);
    for (Eigen::Index k = 0; k < K; ++k)
      for (Eigen::Index j = 0; j < d; ++j)
        params_(k, j) = stream_.normal(StreamTag::Parameter, static_cast<std::uint64_t>(k),
                                       static_cast<std::uint64_t>(j));
  }

  std::size_t num_arms() const noexcept { return static_cast<std::size_t>(params_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(params_.cols()); }
  double sigma() const noexcept { return sigma_; }
  std::uint64_t seed() const noexcept { return stream_.key(); }
  /// Row k is beta_k.
  const Eigen::MatrixXd& parameters() const noexcept { return params_; }

  Eigen::VectorXd context(std::uint64_t t) const {
    const Eigen::Index d = params_.cols();
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    Eigen::VectorXd x(d);
    for (Eigen::Index j = 0; j < d; ++j)
      x[j] = scale * stream_.normal(StreamTag::Context, t, static_cast<std::uint64_t>(j));
    return x;
  }

  Eigen::VectorXd mean_rewards(std::uint64_t t) const { return params_ * context(t); }

  double mean_reward(std::uint64_t t, std::size_t arm) const {
    return params_.row(static_cast<Eigen::Index>(arm)).dot(context(t));
  }

  double reward(std::uint64_t t, std::size_t arm) const {
    return mean_reward(t, arm) + sigma_ * stream_.normal(StreamTag::Noise, t, arm);
  }

  double regret(std::uint64_t t, std::size_t arm) const {
    const Eigen::VectorXd f = mean_rewards(t);
    return f.maxCoeff() - f[static_cast<Eigen::Index>(arm)];
  }

 private:
  CounterStream stream_;
  double sigma_;
  Eigen::MatrixXd params_;
};

using Environment = std::variant<KArmEnv, LinCtxEnv>;

inline Environment env_draw(const EnvConfig& config, std::uint64_t seed) {
  config.validate();
  if (config.kind == EnvKind::KArmed) return KArmEnv(config, seed);
  return LinCtxEnv(config, seed);
}

template <class Env>
StepOutcome step(const Env& env, std::uint64_t t, std::size_t arm) {
  if (arm >= env.num_arms()) throw InvalidArgument("step: arm index out of range");
  return {env.reward(t, arm), env.regret(t, arm)};
}

inline StepOutcome step(const Environment& env, std::uint64_t t, std::size_t arm) {
  return std::visit([&](const auto& e) { return step(e, t, arm); }, env);
}

}  // namespace ratio_bandits
