#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "ratio_bandits/models.hpp"
#include "ratio_bandits/policies.hpp"
#include "test_util.hpp"

namespace rb = ratio_bandits;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

rb::PosteriorSampleBatch batch(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) m.row(i++) = vec(r).transpose();
  return rb::PosteriorSampleBatch(m);
}

std::size_t naive_argmax(const Eigen::VectorXd& v) {
  std::size_t best = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v[i] > v[static_cast<Eigen::Index>(best)]) best = static_cast<std::size_t>(i);
  return best;
}

TEST(TsChoose, Examples) {
  EXPECT_EQ(rb::ts_choose(vec({0.1, 0.9})), 1u);
  EXPECT_EQ(rb::ts_choose(vec({0.4, 0.4, 0.4})), 0u);
  EXPECT_EQ(rb::greedy_choose(vec({0.1, 0.9})), 1u);
  EXPECT_EQ(rb::greedy_choose(vec({-2.0, -2.0})), 0u);
}

TEST(TsChoose, MatchesExhaustiveArgmax) {
  std::mt19937_64 rng(40);
  std::uniform_int_distribution<int> arms(1, 10);
  std::uniform_int_distribution<int> coarse(0, 4);  // coarse values force ties
  for (int i = 0; i < 1000; ++i) {
    Eigen::VectorXd row(arms(rng));
    for (Eigen::Index j = 0; j < row.size(); ++j) row[j] = coarse(rng) * 0.25;
    ASSERT_EQ(rb::ts_choose(row), naive_argmax(row));
    ASSERT_EQ(rb::greedy_choose(row), naive_argmax(row));
  }
}

TEST(UcbChoose, Examples) {
  const std::vector<rb::ConfidenceBounds> b{{0.5, 0.1}, {0.3, 0.4}};
  EXPECT_EQ(rb::ucb_choose(b), 1u);
  // Vanishing radii reduce to greedy on mu_hat.
  const std::vector<rb::ConfidenceBounds> tiny{{0.5, 1e-300}, {0.3, 1e-300}, {0.7, 1e-300}};
  EXPECT_EQ(rb::ucb_choose(tiny), rb::greedy_choose(vec({0.5, 0.3, 0.7})));
}

TEST(UcbChoose, MatchesExhaustiveArgmax) {
  std::mt19937_64 rng(41);
  std::uniform_int_distribution<std::size_t> arms(1, 10);
  for (int i = 0; i < 1000; ++i) {
    const auto b = rb::testing::random_bounds(rng, arms(rng));
    Eigen::VectorXd ucb(static_cast<Eigen::Index>(b.size()));
    for (std::size_t a = 0; a < b.size(); ++a) ucb[static_cast<Eigen::Index>(a)] = b[a].mu_hat() + b[a].radius();
    ASSERT_EQ(rb::ucb_choose(b), naive_argmax(ucb));
  }
}

TEST(TsucbChoose, TargetIsMeanOfRowMaxima) {
  const auto s = batch({{0.2, 0.6}, {0.4, 0.8}});
  EXPECT_NEAR(rb::target_value(s).f_tilde, 0.7, 1e-15);
  EXPECT_EQ(rb::target_value(s).m, 2u);
}

TEST(TsucbChoose, SingleSampleReducesToSelectArm) {
  const auto s = batch({{0.3, 0.65}});
  const std::vector<rb::ConfidenceBounds> b{{0.5, 0.1}, {0.3, 0.4}};
  EXPECT_EQ(rb::tsucb_choose(s, b), rb::select_arm(0.65, b));
}

TEST(TsucbChoose, EqualRadiiPickHighestMean) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    std::vector<rb::ConfidenceBounds> b;
    Eigen::VectorXd mu(5);
    for (int a = 0; a < 5; ++a) {
      mu[a] = u(rng);
      b.emplace_back(mu[a], 0.3);
    }
    const auto s = batch({{1.5, 1.2, 1.1, 1.0, 1.3}});  // f_tilde above every mu_hat
    ASSERT_EQ(rb::tsucb_choose(s, b), naive_argmax(mu));
  }
}

TEST(TsucbChoose, MisalignedColumnsRejected) {
  const std::vector<rb::ConfidenceBounds> b{{0.5, 0.1}, {0.3, 0.4}, {0.1, 0.1}};
  EXPECT_THROW(rb::tsucb_choose(batch({{0.1, 0.2}}), b), rb::InvalidArgument);
}

TEST(IdsStats, IdenticalRowsAreDegenerate) {
  const auto st = rb::ids_stats(batch({{0.1, 0.5, 0.3}, {0.1, 0.5, 0.3}, {0.1, 0.5, 0.3}}));
  EXPECT_DOUBLE_EQ(st.delta[1], 0.0);
  EXPECT_TRUE(st.v.isZero());
}

TEST(IdsStats, HandExample) {
  const auto st = rb::ids_stats(batch({{1, 0}, {0, 1}}));
  EXPECT_DOUBLE_EQ(st.delta[0], 0.5);
  EXPECT_DOUBLE_EQ(st.delta[1], 0.5);
  EXPECT_DOUBLE_EQ(st.v[0], 0.25);
  EXPECT_DOUBLE_EQ(st.v[1], 0.25);
}

TEST(IdsStats, NeedsTwoRows) {
  EXPECT_THROW(rb::ids_stats(batch({{1, 0}})), rb::InvalidArgument);
}

TEST(IdsStats, MatchesNaiveDoubleLoop) {
  std::mt19937_64 rng(43);
  std::uniform_int_distribution<int> arms(1, 8), rows(2, 60);
  std::normal_distribution<double> z(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int K = arms(rng), n = rows(rng);
    Eigen::MatrixXd s(n, K);
    for (int i = 0; i < n; ++i)
      for (int a = 0; a < K; ++a) s(i, a) = z(rng);
    const auto st = rb::ids_stats(rb::PosteriorSampleBatch(s));

    // Direct definition, one quantity at a time.
    std::vector<int> best(n);
    double opt = 0.0;
    for (int i = 0; i < n; ++i) {
      int b = 0;
      for (int a = 1; a < K; ++a)
        if (s(i, a) > s(i, b)) b = a;
      best[i] = b;
      opt += s(i, b) / n;
    }
    for (int a = 0; a < K; ++a) {
      double mean_a = 0.0;
      for (int i = 0; i < n; ++i) mean_a += s(i, a) / n;
      ASSERT_NEAR(st.delta[a], std::max(0.0, opt - mean_a), 1e-10);
      double v = 0.0;
      for (int star = 0; star < K; ++star) {
        int count = 0;
        double cond = 0.0;
        for (int i = 0; i < n; ++i)
          if (best[i] == star) {
            ++count;
            cond += s(i, a);
          }
        if (count == 0) continue;
        const double p = static_cast<double>(count) / n;
        v += p * (cond / count - mean_a) * (cond / count - mean_a);
      }
      ASSERT_NEAR(st.v[a], v, 1e-10);
    }
  }
}

// Exhaustive scan over all pairs and a 1,001-point grid of weights.
double scan_best_ratio(const Eigen::VectorXd& delta, const Eigen::VectorXd& v) {
  double best = std::numeric_limits<double>::infinity();
  for (Eigen::Index a = 0; a < delta.size(); ++a)
    for (Eigen::Index b = a; b < delta.size(); ++b)
      for (int i = 0; i <= 1000; ++i)
        best = std::min(best, rb::information_ratio(i / 1000.0, delta[a], delta[b], v[a], v[b]));
  return best;
}

TEST(IdsChoose, ZeroRegretActionIsPlayedDeterministically) {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(rb::ids_choose(vec({0.0, 0.2}), vec({0.0, 1.0}), rng), 0u);
}

TEST(IdsChoose, PointMassFixture) {
  const auto d = rb::ids_distribution(vec({0.1, 0.1}), vec({0.1, 0.4}));
  EXPECT_EQ(d.first, 1u);
  EXPECT_EQ(d.second, 1u);
  EXPECT_NEAR(d.ratio, 0.025, 1e-15);
}

TEST(IdsChoose, InteriorOptimumFixture) {
  // Grid scan with step 1e-4 gives q* = 0.2298, ratio 0.620345.
  const auto d = rb::ids_distribution(vec({1.0, 0.2}), vec({1.0, 0.01}));
  EXPECT_EQ(d.first, 0u);
  EXPECT_EQ(d.second, 1u);
  EXPECT_NEAR(d.q, 0.2298, 1e-3);
  EXPECT_NEAR(d.ratio, 0.6203, 5e-4);
  EXPECT_LE(d.ratio, 0.620344862780103 + 1e-12);
}

TEST(IdsChoose, AllZeroVariancePlaysSmallestRegret) {
  const auto d = rb::ids_distribution(vec({0.3, 0.1, 0.2}), vec({0.0, 0.0, 0.0}));
  EXPECT_EQ(d.first, 1u);
  EXPECT_EQ(d.q, 1.0);
}

TEST(IdsChoose, NegativeVarianceRejected) {
  std::mt19937_64 rng(45);
  EXPECT_THROW(rb::ids_choose(vec({0.1, 0.2}), vec({-0.1, 0.2}), rng), rb::InvalidArgument);
  EXPECT_THROW(rb::ids_choose(vec({0.1}), vec({0.1, 0.2}), rng), rb::InvalidArgument);
}

TEST(IdsChoose, NeverWorseThanExhaustiveScan) {
  std::mt19937_64 rng(46);
  std::uniform_int_distribution<int> arms(1, 8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const int K = arms(rng);
    Eigen::VectorXd delta(K), v(K);
    for (int a = 0; a < K; ++a) {
      delta[a] = 0.01 + u(rng);
      v[a] = u(rng) < 0.1 ? 0.0 : u(rng);
    }
    const auto d = rb::ids_distribution(delta, v);
    ASSERT_LE(d.ratio, scan_best_ratio(delta, v) + 1e-9);
    ASSERT_GE(d.q, 0.0);
    ASSERT_LE(d.q, 1.0);
  }
}

TEST(IdsChoose, SamplesFromTheTwoPointDistribution) {
  const auto d = rb::ids_distribution(vec({1.0, 0.2}), vec({1.0, 0.01}));
  std::mt19937_64 rng(47);
  const int n = 100000;
  int first = 0;
  for (int i = 0; i < n; ++i) first += rb::ids_choose(vec({1.0, 0.2}), vec({1.0, 0.01}), rng) == 0;
  EXPECT_NEAR(static_cast<double>(first) / n, d.q, 4.0 * std::sqrt(d.q * (1 - d.q) / n));
}

TEST(Decide, IdenticalStreamsGiveIdenticalActions) {
  rb::EnvConfig env;
  env.d = 4;
  env.K = 6;
  env.sigma = 1.0;
  rb::LinearContextualModel model(env, 100);
  model.set_context(Eigen::Vector4d(0.3, -0.2, 0.5, 0.1));
  for (auto kind : {rb::PolicyKind::TS, rb::PolicyKind::TSUCB, rb::PolicyKind::GREEDY,
                    rb::PolicyKind::UCB, rb::PolicyKind::IDS}) {
    rb::PolicyConfig p{kind, 5, 50};
    std::mt19937_64 a(99), b(99);
    for (int i = 0; i < 20; ++i) ASSERT_EQ(rb::decide(p, model, a), rb::decide(p, model, b));
  }
}

// f_tilde with many samples estimates E[max_a theta_a] under the posterior.
TEST(TsucbTarget, ConvergesToExpectedMaximum) {
  rb::KArmModel model(3, 100);
  const double rewards[3][4] = {{1, 0, 1, 1}, {0, 0, 1, 0}, {1, 1, 1, 0}};
  for (int a = 0; a < 3; ++a)
    for (double r : rewards[a]) model.observe(static_cast<std::size_t>(a), r);

  // Reference: a long Monte-Carlo run of max over independent Beta draws.
  std::mt19937_64 ref_rng(1000);
  const int big = 2000000;
  double ref = 0.0, ref_sq = 0.0;
  for (int i = 0; i < big; ++i) {
    double m = 0.0;
    for (std::size_t a = 0; a < 3; ++a) m = std::max(m, model.posterior().sample(a, ref_rng));
    ref += m;
    ref_sq += m * m;
  }
  ref /= big;
  const double sd = std::sqrt(ref_sq / big - ref * ref);
  const std::size_t m = 100000;
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    std::mt19937_64 rng(seed);
    const double f = rb::target_value(model.sample(m, rng)).f_tilde;
    EXPECT_NEAR(f, ref, 3.0 * sd / std::sqrt(static_cast<double>(m)) + 3.0 * sd / std::sqrt(big));
  }
}

}  // namespace
