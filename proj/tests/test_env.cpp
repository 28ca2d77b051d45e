#include <gtest/gtest.h>

#include <cmath>

#include "mnoswitch/dp_oracle.hpp"
#include "mnoswitch/env.hpp"
#include "support/fixtures.hpp"

using namespace mnoswitch;
using mnoswitch::testing::Cell;
using mnoswitch::testing::ScenarioBuilder;

TEST(EffectiveTau, Examples) {
  const ServiceSpec s{"x", 100.0, 0.9};
  EXPECT_EQ(effective_tau(s, false, 20.0), 100.0);
  EXPECT_EQ(effective_tau(s, true, 20.0), 80.0);
  EXPECT_EQ(effective_tau(ServiceSpec{"y", 10.0, 0.9}, true, 20.0), 0.0);
}

TEST(ExpectedUtility, CloudOnlySingleMno) {
  ScenarioBuilder b;
  b.lambda = 10.0;
  const Environment env(b.build());
  EXPECT_DOUBLE_EQ(env.expected_utility({0, 0, 0, 1}, 0), 10.0);
}

TEST(ExpectedUtility, MixedSplit) {
  ScenarioBuilder b;
  b.lambda = 6.0;
  b.cell = [](int, int) { return Cell{0.8, 0.95}; };
  const Environment env(b.build());
  EXPECT_NEAR(env.expected_utility({0, 0, 0, 1}, 0), 14.0, 1e-12);
}

TEST(ExpectedUtility, SwitchWithDelayBeyondBoundPaysPenalty) {
  ScenarioBuilder b;
  b.mnos = 2;
  b.delay_ms = 100.0;  // tau - d = 0, confidence 0 on every tier
  b.fog_prices = {3.0, 2.5};
  const Environment env(b.build());
  EXPECT_DOUBLE_EQ(env.penalty_rate(), 30.0);
  EXPECT_DOUBLE_EQ(env.expected_utility({0, 0, 0, 1}, 1), 30.0 * 10.0);
  EXPECT_DOUBLE_EQ(env.expected_utility({0, 0, 0, 1}, 0), 10.0);
}

TEST(ExpectedUtility, RejectsUnknownStateOrAction) {
  ScenarioBuilder b;
  b.horizon = 2;
  const Environment env(b.build());
  EXPECT_THROW(env.expected_utility({0, 0, 0, 1}, 1), ValidationError);
  EXPECT_THROW(env.expected_utility({1, 0, 0, 1}, 0), ValidationError);
  EXPECT_THROW(env.expected_utility({0, 0, 0, 3}, 0), ValidationError);
  EXPECT_THROW(env.expected_utility({0, 0, 0, 0}, 0), ValidationError);
}

TEST(ExpectedUtility, IndependentOfPreviousMnoWhenNoDelay) {
  ScenarioBuilder b;
  b.locations = 3;
  b.mnos = 3;
  b.delay_ms = 0.0;
  b.cell = [](int l, int m) { return Cell{0.5 + 0.1 * l, 0.85 + 0.05 * m}; };
  b.services = {{"S0", 100.0, 0.9}, {"S1", 50.0, 0.6}};
  const Environment env(b.build());
  for (int l = 0; l < 3; ++l)
    for (int x = 0; x < 2; ++x)
      for (int a = 0; a < 3; ++a) {
        const double ref = env.expected_utility({l, x, 0, 1}, a);
        for (int m = 1; m < 3; ++m) EXPECT_EQ(env.expected_utility({l, x, m, 1}, a), ref);
      }
}

TEST(Step, IdentityChainStayAdvancesTimeOnly) {
  ScenarioBuilder b;
  b.locations = 2;
  b.mnos = 2;
  b.horizon = 3;
  const Environment env(b.build());
  Rng rng(1);
  const State s{1, 0, 1, 2};
  const Transition tr = env.step(s, 1, rng);
  EXPECT_EQ(tr.next_state, (State{1, 0, 1, 3}));
  EXPECT_FALSE(tr.terminal);
  EXPECT_TRUE(env.step(tr.next_state, 0, rng).terminal);
}

TEST(Step, ZeroWorkloadZeroUtility) {
  ScenarioBuilder b;
  b.lambda = 0.0;
  b.horizon = 2;
  const Environment env(b.build());
  Rng rng(1);
  const Transition tr = env.step({0, 0, 0, 1}, 0, rng);
  EXPECT_EQ(tr.workload, 0.0);
  EXPECT_EQ(tr.utility, 0.0);
}

TEST(Step, TerminalStateCannotStep) {
  ScenarioBuilder b;
  b.horizon = 2;
  const Environment env(b.build());
  Rng rng(1);
  EXPECT_THROW(env.step({0, 0, 0, 3}, 0, rng), ValidationError);
  EXPECT_THROW(env.step({0, 0, 0, 1}, 2, rng), ValidationError);
}

TEST(Step, PoissonWorkloadMean) {
  ScenarioBuilder b;
  b.lambda = 4.0;
  const Environment env(b.build());
  Rng rng(17);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += env.step({0, 0, 0, 1}, 0, rng).workload;
  EXPECT_GE(sum / n, 3.94);
  EXPECT_LE(sum / n, 4.06);
}

TEST(Step, NextMnoAlwaysEqualsAction) {
  ScenarioBuilder b;
  b.locations = 3;
  b.mnos = 3;
  b.horizon = 5;
  b.delay_ms = 30.0;
  b.chain = {0.2, 0.5, 0.3, 0.0, 0.0, 1.0, 0.6, 0.4, 0.0};
  const Environment env(b.build());
  Rng rng(23);
  for (int i = 0; i < 10000; ++i) {
    State s = env.sample_initial(rng);
    s.t = 1 + static_cast<int>(uniform_index(rng, 5));
    const int a = static_cast<int>(uniform_index(rng, 3));
    const Transition tr = env.step(s, a, rng);
    ASSERT_EQ(tr.next_state.mno, a);
    ASSERT_EQ(tr.next_state.t, s.t + 1);
    ASSERT_GE(tr.utility, 0.0);
  }
}

TEST(Step, ContextChainFrequencies) {
  ScenarioBuilder b;
  b.locations = 2;
  b.horizon = 2;
  b.chain = {0.25, 0.75, 1.0, 0.0};
  const Environment env(b.build());
  Rng rng(31);
  int to_one = 0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) to_one += env.step({0, 0, 0, 1}, 0, rng).next_state.location == 1 ? 1 : 0;
  EXPECT_NEAR(static_cast<double>(to_one) / n, 0.75, 0.01);
  for (int i = 0; i < 1000; ++i) EXPECT_EQ(env.step({1, 0, 0, 1}, 0, rng).next_state.location, 0);
}

TEST(Rollout, SingleSlotCloudOnly) {
  ScenarioBuilder b;
  b.lambda = 10.0;
  const Environment env(b.build());
  Rng rng(5);
  const auto stats = env.rollout_cost([](const State&) { return 0; }, 10000, rng);
  EXPECT_NEAR(stats.mean, 10.0, 0.1);
  EXPECT_EQ(stats.episodes, 10000u);
}

TEST(Rollout, ZeroHorizonCostsNothing) {
  ScenarioBuilder b;
  b.horizon = 0;
  const Environment env(b.build());
  Rng rng(5);
  EXPECT_EQ(env.rollout_cost([](const State&) { return 0; }, 100, rng).mean, 0.0);
}

TEST(Rollout, SameSeedSameEstimate) {
  ScenarioBuilder b;
  b.locations = 2;
  b.mnos = 2;
  b.horizon = 4;
  b.chain = {0.5, 0.5, 0.5, 0.5};
  const Environment env(b.build());
  Rng r1(8), r2(8);
  const auto pol = [](const State& s) { return s.t % 2; };
  EXPECT_EQ(env.rollout_cost(pol, 500, r1).mean, env.rollout_cost(pol, 500, r2).mean);
}

namespace {

Scenario stochastic_scenario() {
  ScenarioBuilder b;
  b.locations = 3;
  b.mnos = 2;
  b.horizon = 6;
  b.lambda = 5.0;
  b.delay_ms = 95.0;  // switching drops tau below the fast bin
  b.fog_prices = {3.0, 2.0};
  b.cell = [](int l, int m) {
    if (l == 0) return m == 0 ? Cell{0.95, 0.99} : Cell{0.5, 0.99};
    if (l == 1) return m == 0 ? Cell{0.3, 0.92} : Cell{0.85, 0.95};
    return m == 0 ? Cell{0.2, 0.6} : Cell{0.88, 0.9};
  };
  b.chain = {0.6, 0.4, 0.0, 0.1, 0.5, 0.4, 0.3, 0.0, 0.7};
  return b.build();
}

}  // namespace

TEST(Rollout, OptimalPolicyMatchesOracleWithinMonteCarloError) {
  const Environment env(stochastic_scenario());
  const ValueTable vt = solve(env);
  const double exact = initial_value(env, vt);
  Rng rng(77);
  const auto stats = env.rollout_cost(as_function(env, vt.policy()), 20000, rng);
  EXPECT_LE(std::abs(stats.mean - exact), 3.0 * stats.std_error) << exact << " vs " << stats.mean;
}

TEST(Rollout, AnyPolicyNoBetterThanOptimum) {
  const Environment env(stochastic_scenario());
  const double opt = initial_value(env, solve(env));
  Rng rng(78);
  const std::vector<PolicyFn> policies{
      [](const State&) { return 0; }, [](const State&) { return 1; },
      [](const State& s) { return s.location == 0 ? 0 : 1; }, [](const State& s) { return s.t % 2; },
      [](const State& s) { return s.mno; }};
  for (const auto& p : policies) {
    const auto stats = env.rollout_cost(p, 4000, rng);
    EXPECT_GE(stats.mean, opt - 3.0 * stats.std_error);
  }
}

TEST(Scenario, ValidationNamesKey) {
  ScenarioBuilder b;
  b.locations = 2;
  b.chain = {0.5, 0.4, 0.0, 1.0};
  try {
    Environment env(b.build());
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.key().rfind("context_chain", 0), 0u) << e.key();
  }
}

TEST(Scenario, RemarkFeasibilityEnforced) {
  ScenarioBuilder b;
  b.mnos = 2;
  b.cell = [](int, int) { return Cell{0.5, 0.6}; };
  EXPECT_THROW(Environment(b.build()), ValidationError);
}
