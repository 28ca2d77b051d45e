#include <gtest/gtest.h>

#include <sstream>

#include "mnoswitch/dp_oracle.hpp"
#include "mnoswitch/experiments/analysis.hpp"
#include "mnoswitch/experiments/config.hpp"
#include "mnoswitch/experiments/scenario_io.hpp"
#include "mnoswitch/experiments/sweep.hpp"
#include "mnoswitch/experiments/templates.hpp"
#include "mnoswitch/experiments/traces.hpp"
#include "support/fixtures.hpp"

using namespace mnoswitch;
using namespace mnoswitch::experiments;
using mnoswitch::testing::Cell;
using mnoswitch::testing::ScenarioBuilder;

namespace {

Scenario standard(std::uint64_t seed = 1) {
  Rng rng(seed);
  return generate_scenario("standard", rng);
}

}  // namespace

TEST(Templates, StandardIsValidAndUsesServiceTable) {
  const Scenario sc = standard();
  EXPECT_NO_THROW(sc.validate());
  ASSERT_EQ(sc.services.size(), 3u);
  EXPECT_EQ(sc.services[0].tau_ms, 100.0);
  EXPECT_EQ(sc.services[0].gamma, 0.90);
  EXPECT_EQ(sc.services[1].tau_ms, 120.0);
  EXPECT_EQ(sc.services[1].gamma, 0.999);
  EXPECT_EQ(sc.services[2].tau_ms, 400.0);
  EXPECT_EQ(sc.services[2].gamma, 0.999);
  EXPECT_EQ(sc.locations.size(), 5u);
  EXPECT_EQ(sc.mnos.size(), 2u);
  EXPECT_EQ(sc.horizon, 20);
  EXPECT_EQ(sc.switch_delay_ms, 20.0);
  EXPECT_EQ(sc.pricing.cloud, 1.0);
  EXPECT_EQ(sc.pricing.fog_price(sc.mnos[0]), 3.0);
  EXPECT_EQ(sc.pricing.fog_price(sc.mnos[1]), 2.5);
  for (double l : sc.lambda) EXPECT_EQ(l, 5.0);
}

TEST(Templates, FixedSeedGivesIdenticalHash) {
  EXPECT_EQ(scenario_hash(standard(5)), scenario_hash(standard(5)));
  EXPECT_NE(scenario_hash(standard(5)), scenario_hash(standard(6)));
}

TEST(Templates, EveryTemplateValidates) {
  for (const auto& name : template_names()) {
    Rng rng(2);
    EXPECT_NO_THROW(Environment(generate_scenario(name, rng))) << name;
  }
  Rng rng(2);
  EXPECT_THROW(generate_scenario("nope", rng), ValidationError);
}

TEST(Templates, MnoQualityIsCrossed) {
  // The first MNO has the better mean cloud latency, the second the better fog.
  const Scenario sc = standard();
  double cloud[2] = {0, 0}, fog[2] = {0, 0};
  for (const auto& l : sc.locations)
    for (int m = 0; m < 2; ++m) {
      cloud[m] += sc.catalog.at(l, sc.mnos[static_cast<std::size_t>(m)], Tier::cloud).mean();
      fog[m] += sc.catalog.at(l, sc.mnos[static_cast<std::size_t>(m)], Tier::fog).mean();
    }
  EXPECT_LT(cloud[0], cloud[1]);
  EXPECT_LT(fog[1], fog[0]);
}

TEST(Ingest, FourRowsOnePair) {
  std::istringstream in("location_id,mno_id,tier,rtt_ms\nA,X,cloud,40\nA,X,cloud,80\nA,X,fog,12\nA,X,fog,14\n");
  const auto res = ingest_traces(in, 5.0);
  EXPECT_EQ(res.catalog.size(), 2u);
  EXPECT_EQ(res.rows, 4u);
  EXPECT_DOUBLE_EQ(confidence(res.catalog.at("A", "X", Tier::cloud), 40.0), 0.5);
  EXPECT_EQ(confidence(res.catalog.at("A", "X", Tier::fog), 15.0), 1.0);
}

TEST(Ingest, MissingFogTierNamesThePair) {
  std::istringstream in("location_id,mno_id,tier,rtt_ms\nA,X,cloud,40\nA,X,fog,12\nB,Y,cloud,50\n");
  try {
    ingest_traces(in, 5.0);
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("B"), std::string::npos);
    EXPECT_NE(msg.find("Y"), std::string::npos);
    EXPECT_NE(msg.find("fog"), std::string::npos);
  }
}

TEST(Ingest, MalformedRowsReportLineNumbers) {
  const std::vector<std::pair<std::string, std::size_t>> cases{
      {"location_id,mno_id,tier,rtt_ms\nA,X,cloud,40\nA,X,edge,12\n", 3},
      {"location_id,mno_id,tier,rtt_ms\nA,X,cloud,abc\n", 2},
      {"location_id,mno_id,tier,rtt_ms\nA,X,cloud,-3\n", 2},
      {"location_id,mno_id,tier,rtt_ms\nA,X,cloud,40\n\nA,X,fog\n", 4},
      {"loc,mno,tier,rtt\n", 1},
  };
  for (const auto& [text, line] : cases) {
    std::istringstream in(text);
    try {
      ingest_traces(in, 5.0);
      FAIL() << text;
    } catch (const ParseError& e) {
      EXPECT_EQ(e.line(), line) << text;
    }
  }
}

TEST(Ingest, SyntheticRoundTripRecoversConfidence) {
  const Scenario sc = standard();
  Rng rng(3);
  std::stringstream buf;
  write_synthetic_traces(buf, sc.catalog, 1000, rng);
  const auto res = ingest_traces(buf, 5.0);
  for (const auto& [key, truth] : sc.catalog) {
    const auto& [loc, mno, tier] = key;
    EXPECT_EQ(res.counts.at(key), 1000u);
    for (double tau : {20.0, 50.0, 80.0, 100.0, 120.0, 400.0})
      EXPECT_NEAR(confidence(res.catalog.at(loc, mno, tier), tau), confidence(truth, tau), 0.05);
  }
}

TEST(ScenarioIo, JsonRoundTrip) {
  const Scenario sc = standard();
  const auto j = scenario_to_json(sc);
  const Scenario back = scenario_from_json(j);
  EXPECT_EQ(scenario_to_json(back).dump(), j.dump());
  EXPECT_EQ(back.context_chain, sc.context_chain);
  EXPECT_EQ(back.initial_state, sc.initial_state);
}

TEST(ScenarioIo, ValidationErrorsNameTheKey) {
  const auto good = scenario_to_json(standard());
  const std::vector<std::pair<std::string, std::function<void(nlohmann::json&)>>> cases{
      {"horizon", [](nlohmann::json& j) { j.erase("horizon"); }},
      {"pricing.fog", [](nlohmann::json& j) { j["pricing"]["fog"] = "cheap"; }},
      {"lambda", [](nlohmann::json& j) { j["lambda"] = std::vector<double>{1.0, 2.0}; }},
      {"context_chain", [](nlohmann::json& j) { j["context_chain"]["matrix"][0][0] = 0.99; }},
      {"switch_delay_ms", [](nlohmann::json& j) { j["switch_delay_ms"] = -1; }},
      {"mnos", [](nlohmann::json& j) { j["mnos"] = {"MNO1", "MNO1"}; }},
  };
  for (const auto& [key, mutate] : cases) {
    auto j = good;
    mutate(j);
    try {
      scenario_from_json(j);
      FAIL() << key;
    } catch (const ValidationError& e) {
      EXPECT_EQ(e.key().rfind(key, 0), 0u) << key << " vs " << e.key();
      EXPECT_NE(std::string(e.what()).find(key), std::string::npos);
    }
  }
}

TEST(Sweep, DelaySweepIsMonotoneUnderDp) {
  SweepSpec spec;
  spec.parameter = SweepParameter::switch_delay_ms;
  spec.values = {0, 10, 20, 40};
  const auto res = run_sweep(spec, standard());
  ASSERT_EQ(res.points.size(), 4u);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LE(res.points[i - 1].mean, res.points[i].mean);
}

TEST(Sweep, FogPriceSweepIsMonotoneUnderDp) {
  SweepSpec spec;
  spec.parameter = SweepParameter::fog_price;
  spec.values = {1.5, 2, 3, 4};
  const auto res = run_sweep(spec, standard());
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LE(res.points[i - 1].mean, res.points[i].mean);
}

TEST(Sweep, SingleValueMatchesDirectRun) {
  const Scenario base = standard();
  SweepSpec spec;
  spec.parameter = SweepParameter::switch_delay_ms;
  spec.values = {20};
  spec.agent = AgentKind::qlearning;
  spec.seed = 9;
  spec.qlearning.episodes = 50;
  const auto res = run_sweep(spec, base);
  Rng rng(9);
  const auto direct = agents::train_qlearning(Environment(base), spec.qlearning, rng);
  EXPECT_EQ(res.points.at(0).mean, direct.log.back().greedy_cost);
  EXPECT_EQ(res.points.at(0).std_error, 0.0);
}

TEST(Sweep, ErrorsCarryPointContext) {
  SweepSpec spec;
  spec.parameter = SweepParameter::fog_price;
  spec.values = {0.5};
  try {
    run_sweep(spec, standard());
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("fog_price=0.5"), std::string::npos) << e.what();
  }
}

TEST(Sweep, CsvLayout) {
  SweepSpec spec;
  spec.values = {0, 40};
  spec.replicates = 2;
  const auto res = run_sweep(spec, standard());
  const auto csv = results_csv(res);
  EXPECT_EQ(csv.rfind("parameter,value,agent,replicates,mean_cost,stderr\n", 0), 0u);
  EXPECT_NE(csv.find("\nswitch_delay_ms,40,dp,2,"), std::string::npos);
  EXPECT_EQ(replicates_csv(res).rfind("parameter,value,agent,seed,cost\n", 0), 0u);
}

TEST(Baseline, FixedMnoNeverBeatsOptimum) {
  const Environment env(standard());
  const double opt = initial_value(env, solve(env));
  for (int m = 0; m < env.num_mnos(); ++m) EXPECT_GE(run_fixed_mno_baseline(env, m).points[0].mean, opt);
  EXPECT_GT(best_fixed_mno_cost(env), opt);
}

TEST(Baseline, SingleMnoEqualsOptimum) {
  Rng rng(4);
  const Environment env(generate_scenario("single_mno", rng));
  EXPECT_NEAR(run_fixed_mno_baseline(env, 0).points[0].mean, initial_value(env, solve(env)), 1e-9);
}

TEST(Analysis, WorkloadSharesAddUp) {
  ScenarioBuilder b;
  b.locations = 2;
  b.mnos = 2;
  b.horizon = 3;
  b.lambda = 4.0;
  b.chain = {0.5, 0.5, 0.5, 0.5};
  b.cell = [](int, int m) { return m == 0 ? Cell{0.8, 0.95} : Cell{0.5, 0.95}; };
  const Environment env(b.build());
  const auto shares = expected_workload(env, Policy::constant(env, 0));
  EXPECT_NEAR(shares.total[0], 12.0, 1e-12);
  EXPECT_EQ(shares.total[1], 0.0);
  EXPECT_NEAR(shares.fog[0], 12.0 * 2.0 / 3.0, 1e-12);
}

TEST(Config, RunConfigRoundTrip) {
  const auto rc = load_run_config(std::filesystem::path(MNOSWITCH_CONFIG_DIR) / "standard.json");
  const auto again = run_config_from_json(to_json(rc));
  EXPECT_EQ(to_json(again).dump(), to_json(rc).dump());
  EXPECT_EQ(rc.dqn.learning_rate, 3e-3);
}
