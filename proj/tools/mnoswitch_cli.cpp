// mnoswitch: command-line harness for scenario simulation, agent training,
// policy evaluation, parameter sweeps and RTT trace ingestion.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mnoswitch/mnoswitch.hpp"

namespace fs = std::filesystem;
using namespace mnoswitch;
using namespace mnoswitch::experiments;

namespace {

std::string utc_now() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_run_dir(const fs::path& dir, const std::string& results, json resolved,
                   const std::vector<std::uint64_t>& seeds) {
  fs::create_directories(dir);
  write_text_file(dir / "results.csv", results);
  resolved["metadata"]["config_hash"] = hex64(fnv1a(resolved.dump()));
  resolved["metadata"]["created_utc"] = utc_now();
  write_text_file(dir / "config.resolved.json", resolved.dump(2) + "\n");
  std::ostringstream os;
  for (auto s : seeds) os << s << '\n';
  write_text_file(dir / "seeds.txt", os.str());
}

int cmd_simulate(const std::string& config, std::uint64_t seed, std::size_t episodes, const std::string& out) {
  const auto rc = load_run_config(config);
  const Environment env(rc.scenario);
  const auto table = solve(env);
  std::ostringstream os;
  os << "policy,exact_cost,mc_mean,mc_stderr,episodes\n";
  const auto row = [&](const std::string& name, const Policy& p) {
    Rng rng(seed);
    const auto mc = env.rollout_cost(as_function(env, p), episodes, rng);
    os << name << ',' << format_double(policy_cost(env, p)) << ',' << format_double(mc.mean) << ','
       << format_double(mc.std_error) << ',' << mc.episodes << '\n';
  };
  row("dp-optimal", table.policy());
  for (int m = 0; m < env.num_mnos(); ++m)
    row("fixed-" + env.scenario().mnos[static_cast<std::size_t>(m)], Policy::constant(env, m));
  std::cout << os.str();
  if (!out.empty()) {
    json resolved = to_json(rc);
    resolved["metadata"] = {{"command", "simulate"}, {"seed", seed}, {"episodes", episodes},
                            {"scenario_hash", scenario_hash(rc.scenario)}};
    write_run_dir(out, os.str(), resolved, {seed});
    write_text_file(fs::path(out) / "policy.csv", policy_csv(env, table.policy()));
  }
  return 0;
}

int cmd_train(const std::string& agent, const std::string& config, std::uint64_t seed, const std::string& out) {
  const auto rc = load_run_config(config);
  const Environment env(rc.scenario);
  const double optimum = initial_value(env, solve(env));
  Rng rng(seed);
  std::vector<agents::EpisodeLog> log;
  Policy greedy;
  json resolved = to_json(rc);
  fs::create_directories(out);
  if (agent == "dqn") {
    const auto res = agents::train_dqn(env, rc.dqn, rng);
    log = res.log;
    greedy = agents::greedy_policy(env, res.primary, agents::FeatureEncoder(env, rc.dqn.include_time_feature));
    nn::save_checkpoint(res.primary, (fs::path(out) / "network.json").string());
    resolved.erase("qlearning");
  } else if (agent == "qlearning") {
    const auto res = agents::train_qlearning(env, rc.qlearning, rng);
    log = res.log;
    greedy = agents::greedy_policy(env, res.table);
    resolved.erase("dqn");
  } else {
    throw ValidationError("agent", "expected dqn or qlearning");
  }
  resolved["metadata"] = {{"command", "train"}, {"agent", agent}, {"seed", seed},
                          {"scenario_hash", scenario_hash(rc.scenario)}, {"dp_optimal_cost", optimum}};
  write_run_dir(out, training_log_csv(log), resolved, {seed});
  write_text_file(fs::path(out) / "policy.csv", policy_csv(env, greedy));
  const double final_cost = policy_cost(env, greedy);
  std::cout << "agent=" << agent << " seed=" << seed << " episodes=" << log.size()
            << " greedy_cost=" << format_double(final_cost) << " dp_optimal=" << format_double(optimum)
            << " gap=" << format_double(final_cost / optimum - 1.0) << '\n';
  return 0;
}

int cmd_evaluate(const std::string& policy_file, const std::string& config) {
  const auto rc = load_run_config(config);
  const Environment env(rc.scenario);
  const Policy p = load_policy(policy_file, env);
  const double cost = policy_cost(env, p);
  const double optimum = initial_value(env, solve(env));
  std::cout << "policy_cost,dp_optimal,gap\n"
            << format_double(cost) << ',' << format_double(optimum) << ',' << format_double(cost / optimum - 1.0)
            << '\n';
  return 0;
}

int cmd_sweep(const std::string& spec_file, const std::string& out) {
  const auto loaded = sweep_from_json(load_json_file(spec_file), fs::path(spec_file).parent_path());
  const auto result = run_sweep(loaded.spec, loaded.base);
  std::vector<std::uint64_t> seeds;
  for (std::size_t r = 0; r < loaded.spec.replicates; ++r) seeds.push_back(loaded.spec.seed + r);
  json resolved = to_json(loaded.spec, loaded.base);
  resolved["metadata"] = {{"command", "sweep"}, {"scenario_hash", scenario_hash(loaded.base)}};
  write_run_dir(out, results_csv(result), resolved, seeds);
  write_text_file(fs::path(out) / "replicates.csv", replicates_csv(result));
  std::cout << results_csv(result);
  return 0;
}

int cmd_ingest(const std::string& traces, double bin_width, const std::string& out) {
  const auto res = ingest_traces(fs::path(traces), bin_width);
  write_text_file(out, catalog_to_json(res.catalog, bin_width).dump(2) + "\n");
  std::cout << "location_id,mno_id,tier,samples,bins\n";
  for (const auto& [key, n] : res.counts) {
    const auto& [loc, mno, tier] = key;
    std::cout << loc << ',' << mno << ',' << to_string(tier) << ',' << n << ','
              << res.catalog.at(loc, mno, tier).size() << '\n';
  }
  return 0;
}

int cmd_generate(const std::string& name, std::uint64_t seed, const std::string& out) {
  Rng rng(seed);
  const auto sc = generate_scenario(name, rng);
  write_text_file(out, scenario_to_json(sc).dump(2) + "\n");
  std::cout << "template=" << name << " seed=" << seed << " hash=" << scenario_hash(sc) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-operator switching for fog/cloud-connected vehicles"};
  app.require_subcommand(1);

  std::string config, out, agent, policy, spec, traces, name = "standard";
  std::uint64_t seed = 1;
  std::size_t episodes = 10000;
  double bin_width = kDefaultBinWidthMs;

  auto* simulate = app.add_subcommand("simulate", "Exact and Monte Carlo costs of the DP policy and fixed-MNO baselines");
  simulate->add_option("--config", config, "Run config or scenario JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--seed", seed, "Random seed");
  simulate->add_option("--episodes", episodes, "Monte Carlo episodes per policy");
  simulate->add_option("--out", out, "Optional output directory");

  auto* train = app.add_subcommand("train", "Train a learning agent and log its greedy-policy cost per episode");
  train->add_option("--agent", agent, "dqn or qlearning")->required()->check(CLI::IsMember({"dqn", "qlearning"}));
  train->add_option("--config", config, "Run config or scenario JSON")->required()->check(CLI::ExistingFile);
  train->add_option("--seed", seed, "Random seed");
  train->add_option("--out", out, "Output directory")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Exact expected cost of a policy CSV");
  evaluate->add_option("--policy", policy, "Policy CSV (t,location,service,mno_in,action)")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--config", config, "Run config or scenario JSON")->required()->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep");
  sweep->add_option("--spec", spec, "Sweep spec JSON")->required()->check(CLI::ExistingFile);
  sweep->add_option("--out", out, "Output directory")->required();

  auto* ingest = app.add_subcommand("ingest", "Bin RTT traces into a latency catalog");
  ingest->add_option("--traces", traces, "CSV with location_id,mno_id,tier,rtt_ms")->required()->check(CLI::ExistingFile);
  ingest->add_option("--bin-width", bin_width, "Histogram bin width in ms")->check(CLI::PositiveNumber);
  ingest->add_option("--out", out, "Catalog JSON to write")->required();

  auto* generate = app.add_subcommand("generate", "Write a synthetic scenario from a template");
  generate->add_option("--template", name, "standard, symmetric or single_mno");
  generate->add_option("--seed", seed, "Template seed");
  generate->add_option("--out", out, "Scenario JSON to write")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*simulate) return cmd_simulate(config, seed, episodes, out);
    if (*train) return cmd_train(agent, config, seed, out);
    if (*evaluate) return cmd_evaluate(policy, config);
    if (*sweep) return cmd_sweep(spec, out);
    if (*ingest) return cmd_ingest(traces, bin_width, out);
    if (*generate) return cmd_generate(name, seed, out);
  } catch (const std::exception& e) {
    std::string msg = e.what();
    for (char& c : msg)
      if (c == '\n') c = ' ';
    std::cerr << "error: " << msg << '\n';
    return 2;
  }
  return 0;
}
