#pragma once

// Deterministic experiment runner: episodes, (cell x policy x run) grids on
// a worker pool, and the paired relative-regret estimator
// 100 * E[Regret(ALG) / Regret(TS)].

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "ratio_bandits/envs.hpp"
#include "ratio_bandits/errors.hpp"
#include "ratio_bandits/models.hpp"
#include "ratio_bandits/policies.hpp"
#include "ratio_bandits/random.hpp"

namespace ratio_bandits {

struct RunResult {
  EnvConfig env;
  std::uint64_t T = 0;
  PolicyConfig policy;
  std::uint64_t run_id = 0;
  std::uint64_t env_seed = 0;
  double final_regret = 0.0;
  bool skipped = false;  // paired TS run had zero regret
  std::vector<std::uint64_t> trace_steps;
  std::vector<double> trace;  // cumulative regret at trace_steps
};

struct RelativeRegretCell {
  EnvConfig env;
  std::uint64_t T = 0;
  PolicyConfig policy;
  double mean_pct_of_ts = 0.0;
  double ci95_halfwidth = 0.0;
  std::size_t n_runs = 0;
  std::size_t n_skipped = 0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  EnvConfig env;                      // template; K and sigma come from the lists
  std::vector<std::size_t> K_values;
  std::vector<double> sigma_values;   // ignored for K-armed environments
  std::uint64_t T = 1000;
  std::uint64_t runs = 10;
  std::vector<PolicyConfig> policies;
  std::uint64_t seed = 0;
  std::uint64_t trace_stride = 0;     // 0 = ceil(T / 200)
  std::string out;

  std::vector<EnvConfig> cells() const {
    std::vector<EnvConfig> out_cells;
    for (std::size_t K : K_values) {
      if (env.kind == EnvKind::KArmed) {
        EnvConfig c = env;
        c.K = K;
        c.sigma = 0.0;
        out_cells.push_back(std::move(c));
        continue;
      }
      for (double sigma : sigma_values) {
        EnvConfig c = env;
        c.K = K;
        c.sigma = sigma;
        out_cells.push_back(std::move(c));
      }
    }
    return out_cells;
  }

  void validate() const {
    if (K_values.empty()) throw ConfigError("env.K", "no arm counts given");
    if (env.kind == EnvKind::LinearContextual && sigma_values.empty())
      throw ConfigError("env.sigma", "no noise levels given");
    if (T < 1) throw ConfigError("T", "horizon must be >= 1");
    if (runs < 1) throw ConfigError("runs", "need at least one run per cell");
    if (policies.empty()) throw ConfigError("policies", "no policies given");
    for (const auto& c : cells()) {
      c.validate();
      if (c.kind == EnvKind::KArmed && (T < c.K || T < 2))
        throw ConfigError("T", "K-armed horizon must be >= max(K, 2)");
    }
    for (const auto& p : policies) {
      try {
        p.validate();
      } catch (const InvalidArgument& e) {
        throw ConfigError("policies", e.what());
      }
    }
  }
};

inline std::uint64_t default_trace_stride(std::uint64_t T) {
  return std::max<std::uint64_t>(1, (T + 199) / 200);
}

/// Plays one episode of `T` steps. `choose(model, t, rng)` picks an arm
/// whenever the model does not force one.
template <class Env, class Model, class Rng, class Chooser>
RunResult run_episode(const Env& env, Model& model, std::uint64_t T, Rng& rng,
                      Chooser&& choose, std::uint64_t trace_stride = 0) {
  const std::uint64_t stride = trace_stride == 0 ? default_trace_stride(T) : trace_stride;
  RunResult out;
  out.T = T;
  out.env_seed = env.seed();
  double cumulative = 0.0;
  for (std::uint64_t t = 1; t <= T; ++t) {
    model.begin_step(env, t);
    const auto forced = model.forced_arm(t);
    const std::size_t arm = forced ? *forced : choose(std::as_const(model), t, rng);
    const StepOutcome o = step(env, t, arm);
    cumulative += o.regret;
    model.observe(arm, o.reward);
    if (t % stride == 0 || t == T) {
      out.trace_steps.push_back(t);
      out.trace.push_back(cumulative);
    }
  }
  out.final_regret = cumulative;
  return out;
}

/// Runs `policy` for T steps on the instance drawn from (env, seed).
inline RunResult run_one(const EnvConfig& env, const PolicyConfig& policy, std::uint64_t T,
                         std::uint64_t seed, std::uint64_t run_id = 0,
                         std::uint64_t trace_stride = 0) {
  env.validate();
  policy.validate();
  if (T < 1) throw ConfigError("T", "horizon must be >= 1");
  auto rng = policy_engine(seed, policy.label());
  auto chooser = [&policy](const auto& model, std::uint64_t, auto& r) {
    return decide(policy, model, r);
  };
  RunResult out;
  if (env.kind == EnvKind::KArmed) {
    if (T < env.K) throw ConfigError("T", "K-armed horizon must be >= K");
    KArmEnv e(env, seed);
    KArmModel model(env.K, T);
    out = run_episode(e, model, T, rng, chooser, trace_stride);
  } else {
    LinCtxEnv e(env, seed);
    LinearContextualModel model(env, T);
    out = run_episode(e, model, T, rng, chooser, trace_stride);
  }
  out.env = env;
  out.policy = policy;
  out.run_id = run_id;
  return out;
}

namespace detail {

inline auto env_key(const EnvConfig& e, std::uint64_t T) {
  return std::make_tuple(static_cast<int>(e.kind), e.reported_d(), e.K, e.reported_sigma(), T);
}

inline auto policy_key(const PolicyConfig& p) {
  return std::make_tuple(static_cast<int>(p.kind), p.samples_per_step());
}

inline std::string describe(const EnvConfig& e, std::uint64_t T, const PolicyConfig& p,
                            std::uint64_t run_id) {
  std::ostringstream s;
  s << to_string(e.kind) << " d=" << e.reported_d() << " K=" << e.K
    << " sigma=" << e.reported_sigma() << " T=" << T << " policy=" << p.label()
    << " run=" << run_id;
  return s.str();
}

}  // namespace detail

/// Canonical ordering: env cell, policy, run id.
inline bool canonical_less(const RunResult& a, const RunResult& b) {
  return std::make_tuple(detail::env_key(a.env, a.T), detail::policy_key(a.policy), a.run_id) <
         std::make_tuple(detail::env_key(b.env, b.T), detail::policy_key(b.policy), b.run_id);
}

/// Flags every run whose paired TS run has zero regret.
inline void mark_skipped(std::vector<RunResult>& results) {
  std::map<std::tuple<decltype(detail::env_key(EnvConfig{}, 0)), std::uint64_t>, bool> zero_ts;
  for (const auto& r : results)
    if (r.policy.kind == PolicyKind::TS)
      zero_ts[{detail::env_key(r.env, r.T), r.run_id}] = r.final_regret == 0.0;
  for (auto& r : results) {
    auto it = zero_ts.find({detail::env_key(r.env, r.T), r.run_id});
    r.skipped = it != zero_ts.end() && it->second;
  }
}

class GridError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs every (cell, policy, run) task on `threads` workers. Output is
/// canonically sorted, so it does not depend on scheduling.
inline std::vector<RunResult> run_grid(const ExperimentConfig& config, unsigned threads = 1) {
  config.validate();
  struct Task {
    EnvConfig env;
    const PolicyConfig* policy;
    std::uint64_t run_id;
  };
  std::vector<Task> tasks;
  for (const auto& cell : config.cells())
    for (const auto& p : config.policies)
      for (std::uint64_t r = 0; r < config.runs; ++r) tasks.push_back({cell, &p, r});

  std::vector<RunResult> results(tasks.size());
  std::vector<std::exception_ptr> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size() && !failed; i = next++) {
      const Task& task = tasks[i];
      try {
        results[i] = run_one(task.env, *task.policy, config.T,
                             env_seed(config.seed, task.env, task.run_id), task.run_id,
                             config.trace_stride);
      } catch (...) {
        errors[i] = std::current_exception();
        failed = true;
      }
    }
  };
  threads = std::max(1u, threads);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker);
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i]) continue;
    const std::string where =
        detail::describe(tasks[i].env, config.T, *tasks[i].policy, tasks[i].run_id);
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw GridError("grid cell failed (" + where + "): " + e.what());
    }
  }
  std::sort(results.begin(), results.end(), canonical_less);
  mark_skipped(results);
  return results;
}

/// Paired relative regret per (cell, policy): mean of 100 * ALG/TS over
/// runs sharing an environment seed, with a normal-approximation 95%
/// half-width. Runs whose TS regret is zero are excluded and counted.
inline std::vector<RelativeRegretCell> aggregate(const std::vector<RunResult>& results) {
  using EnvKey = decltype(detail::env_key(EnvConfig{}, 0));
  using PolicyKey = decltype(detail::policy_key(PolicyConfig{}));
  struct CellRuns {
    const RunResult* sample = nullptr;
    std::map<PolicyKey, std::map<std::uint64_t, const RunResult*>> by_policy;
  };
  std::map<EnvKey, CellRuns> cells;
  for (const auto& r : results) {
    auto& cell = cells[detail::env_key(r.env, r.T)];
    if (!cell.sample) cell.sample = &r;
    auto& runs = cell.by_policy[detail::policy_key(r.policy)];
    if (!runs.emplace(r.run_id, &r).second)
      throw AggregationError("duplicate run " + detail::describe(r.env, r.T, r.policy, r.run_id));
  }

  std::vector<RelativeRegretCell> out;
  for (const auto& [key, cell] : cells) {
    auto ts_it = cell.by_policy.end();
    for (auto it = cell.by_policy.begin(); it != cell.by_policy.end(); ++it)
      if (std::get<0>(it->first) == static_cast<int>(PolicyKind::TS)) ts_it = it;
    if (ts_it == cell.by_policy.end())
      throw AggregationError("missing TS baseline in cell " +
                             detail::describe(cell.sample->env, cell.sample->T, PolicyConfig{}, 0));
    const auto& ts_runs = ts_it->second;
    for (const auto& [pkey, runs] : cell.by_policy) {
      RelativeRegretCell c;
      c.env = runs.begin()->second->env;
      c.T = runs.begin()->second->T;
      c.policy = runs.begin()->second->policy;
      std::vector<double> ratios;
      for (const auto& [run_id, r] : runs) {
        auto ts = ts_runs.find(run_id);
        if (ts == ts_runs.end())
          throw AggregationError("missing TS baseline for " +
                                 detail::describe(r->env, r->T, r->policy, run_id));
        if (ts->second->env_seed != r->env_seed)
          throw AggregationError("unpaired runs (env seeds differ) for " +
                                 detail::describe(r->env, r->T, r->policy, run_id));
        if (ts->second->final_regret == 0.0) {
          ++c.n_skipped;
          continue;
        }
        ratios.push_back(r->final_regret / ts->second->final_regret);
      }
      c.n_runs = ratios.size();
      if (ratios.empty()) {
        c.mean_pct_of_ts = std::nan("");
        c.ci95_halfwidth = std::nan("");
      } else {
        double sum = 0.0;
        for (double x : ratios) sum += x;
        const double n = static_cast<double>(ratios.size());
        const double mean = sum / n;
        double ss = 0.0;
        for (double x : ratios) ss += (x - mean) * (x - mean);
        const double sd = ratios.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
        c.mean_pct_of_ts = 100.0 * mean;
        c.ci95_halfwidth = 100.0 * 1.96 * sd / std::sqrt(n);
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

}  // namespace ratio_bandits
