// Runs TS and TS-UCB(1) on a few Bernoulli bandits and prints regret at
// a handful of checkpoints.

#include <cstdio>

#include "ratio_bandits/harness.hpp"

int main() {
  namespace rb = ratio_bandits;
  rb::EnvConfig env;
  env.kind = rb::EnvKind::KArmed;
  env.K = 10;
  const std::uint64_t T = 5000;

  for (const auto& policy : {rb::PolicyConfig{rb::PolicyKind::TS},
                             rb::PolicyConfig{rb::PolicyKind::TSUCB, 1},
                             rb::PolicyConfig{rb::PolicyKind::UCB}}) {
    std::printf("%-10s", policy.label().c_str());
    double total = 0.0;
    const int runs = 20;
    for (int run = 0; run < runs; ++run)
      total += rb::run_one(env, policy, T, rb::env_seed(2024, env, run), run).final_regret;
    std::printf(" mean regret over %d runs at T=%llu: %.1f\n", runs,
                static_cast<unsigned long long>(T), total / runs);
  }
}
