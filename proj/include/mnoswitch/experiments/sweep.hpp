#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mnoswitch/agents/dqn.hpp"
#include "mnoswitch/agents/qlearning.hpp"
#include "mnoswitch/dp_oracle.hpp"
#include "mnoswitch/env.hpp"
#include "mnoswitch/experiments/analysis.hpp"
#include "mnoswitch/experiments/config.hpp"
#include "mnoswitch/experiments/csv.hpp"

namespace mnoswitch::experiments {

enum class SweepParameter { switch_delay_ms, fog_price, service_spec };
enum class AgentKind { dp, dqn, qlearning, fixed_mno };

inline SweepParameter parse_sweep_parameter(const std::string& s) {
  if (s == "switch_delay_ms") return SweepParameter::switch_delay_ms;
  if (s == "fog_price") return SweepParameter::fog_price;
  if (s == "service_spec") return SweepParameter::service_spec;
  throw ValidationError("parameter", "expected switch_delay_ms, fog_price or service_spec, got '" + s + "'");
}

inline const char* to_string(SweepParameter p) {
  switch (p) {
    case SweepParameter::switch_delay_ms: return "switch_delay_ms";
    case SweepParameter::fog_price: return "fog_price";
    case SweepParameter::service_spec: return "service_spec";
  }
  return "?";
}

inline AgentKind parse_agent(const std::string& s) {
  if (s == "dp") return AgentKind::dp;
  if (s == "dqn") return AgentKind::dqn;
  if (s == "qlearning") return AgentKind::qlearning;
  if (s == "fixed-mno") return AgentKind::fixed_mno;
  throw ValidationError("agent", "expected dp, dqn, qlearning or fixed-mno, got '" + s + "'");
}

inline const char* to_string(AgentKind a) {
  switch (a) {
    case AgentKind::dp: return "dp";
    case AgentKind::dqn: return "dqn";
    case AgentKind::qlearning: return "qlearning";
    case AgentKind::fixed_mno: return "fixed-mno";
  }
  return "?";
}

// One sweep: for every value, rebuild the scenario and run `agent` once per
// replicate. Replicate r uses seed `seed + r`.
//
// fog_price values are multiples of the cloud price and apply to every MNO,
// or only to `mno` when it is set. service_spec values are {tau_ms, gamma}
// objects that replace every service's level. `service_override`, when set,
// is applied to the base scenario before the swept parameter.
struct SweepSpec {
  SweepParameter parameter = SweepParameter::switch_delay_ms;
  json values = json::array();
  std::size_t replicates = 1;
  AgentKind agent = AgentKind::dp;
  std::optional<std::string> mno;
  std::optional<ServiceSpec> service_override;
  std::uint64_t seed = 1;
  agents::DqnConfig dqn;
  agents::QLearningConfig qlearning;

  void validate() const {
    if (!values.is_array() || values.empty()) throw ValidationError("values", "must be a non-empty array");
    if (replicates < 1) throw ValidationError("replicates", "must be >= 1");
    if (agent == AgentKind::fixed_mno && !mno) throw ValidationError("mno", "fixed-mno agent needs an mno");
  }
};

inline ServiceSpec service_level_from_json(const json& j, const std::string& key) {
  if (!j.is_object()) throw ValidationError(key, "expected {tau_ms, gamma}");
  ServiceSpec s;
  s.id = j.value("id", std::string("override"));
  s.tau_ms = detail::require_as<double>(j, "tau_ms");
  s.gamma = detail::require_as<double>(j, "gamma");
  s.validate();
  return s;
}

inline std::string value_label(SweepParameter p, const json& v) {
  if (p == SweepParameter::service_spec)
    return format_double(v.at("tau_ms").get<double>()) + "ms/" + format_double(v.at("gamma").get<double>());
  return format_double(v.get<double>());
}

inline void override_services(Scenario& sc, const ServiceSpec& level) {
  for (auto& s : sc.services) {
    s.tau_ms = level.tau_ms;
    s.gamma = level.gamma;
  }
}

// Scenario for one sweep point.
inline Scenario apply_sweep_value(Scenario sc, const SweepSpec& spec, const json& value) {
  if (spec.service_override) override_services(sc, *spec.service_override);
  switch (spec.parameter) {
    case SweepParameter::switch_delay_ms:
      sc.switch_delay_ms = detail::get_as<double>(value, "values");
      break;
    case SweepParameter::fog_price: {
      const double price = detail::get_as<double>(value, "values") * sc.pricing.cloud;
      if (spec.mno) {
        (void)sc.mno_index(*spec.mno);
        sc.pricing.fog[*spec.mno] = price;
      } else {
        for (auto& [id, p] : sc.pricing.fog) p = price;
      }
      break;
    }
    case SweepParameter::service_spec:
      override_services(sc, service_level_from_json(value, "values"));
      break;
  }
  sc.validate();
  return sc;
}

// Exact expected cost reached by `agent` on `env` with `seed`. Learned agents
// report the cost of their final greedy policy.
inline double run_agent(const Environment& env, AgentKind agent, std::uint64_t seed, const SweepSpec& spec) {
  switch (agent) {
    case AgentKind::dp:
      return initial_value(env, solve(env));
    case AgentKind::fixed_mno:
      return policy_cost(env, Policy::constant(env, env.scenario().mno_index(*spec.mno)));
    case AgentKind::dqn: {
      Rng rng(seed);
      const auto res = agents::train_dqn(env, spec.dqn, rng);
      if (!res.log.empty()) return res.log.back().greedy_cost;
      return policy_cost(env, agents::greedy_policy(env, res.primary,
                                                    agents::FeatureEncoder(env, spec.dqn.include_time_feature)));
    }
    case AgentKind::qlearning: {
      Rng rng(seed);
      const auto res = agents::train_qlearning(env, spec.qlearning, rng);
      if (!res.log.empty()) return res.log.back().greedy_cost;
      return policy_cost(env, agents::greedy_policy(env, res.table));
    }
  }
  return 0.0;
}

inline RunResult run_sweep(const SweepSpec& spec, const Scenario& base) {
  spec.validate();
  RunResult out;
  for (const auto& value : spec.values) {
    PointResult point;
    point.parameter = to_string(spec.parameter);
    point.agent = to_string(spec.agent);
    try {
      point.value = value_label(spec.parameter, value);
      const Environment env(apply_sweep_value(base, spec, value));
      for (std::size_t r = 0; r < spec.replicates; ++r) {
        const std::uint64_t seed = spec.seed + r;
        point.seeds.push_back(seed);
        point.costs.push_back(run_agent(env, spec.agent, seed, spec));
      }
    } catch (const std::exception& e) {
      throw Error(std::string("sweep point ") + to_string(spec.parameter) + "=" + value.dump() + ": " + e.what());
    }
    point.summarize();
    out.points.push_back(std::move(point));
  }
  return out;
}

inline std::string results_csv(const RunResult& r) {
  std::ostringstream os;
  os << "parameter,value,agent,replicates,mean_cost,stderr\n";
  for (const auto& p : r.points)
    os << p.parameter << ',' << p.value << ',' << p.agent << ',' << p.costs.size() << ','
       << format_double(p.mean) << ',' << format_double(p.std_error) << '\n';
  return os.str();
}

inline std::string replicates_csv(const RunResult& r) {
  std::ostringstream os;
  os << "parameter,value,agent,seed,cost\n";
  for (const auto& p : r.points)
    for (std::size_t i = 0; i < p.costs.size(); ++i)
      os << p.parameter << ',' << p.value << ',' << p.agent << ',' << p.seeds[i] << ',' << format_double(p.costs[i])
         << '\n';
  return os.str();
}

// Parses a sweep spec document. The base scenario comes from "base" (a run
// config object or a path to one), resolved relative to `base_dir`.
struct LoadedSweep {
  SweepSpec spec;
  Scenario base;
};

inline LoadedSweep sweep_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  LoadedSweep out;
  auto& s = out.spec;
  s.parameter = parse_sweep_parameter(detail::require_as<std::string>(j, "parameter"));
  s.values = detail::require(j, "values");
  if (j.contains("replicates")) s.replicates = detail::get_as<std::size_t>(j.at("replicates"), "replicates");
  if (j.contains("agent")) s.agent = parse_agent(detail::get_as<std::string>(j.at("agent"), "agent"));
  if (j.contains("mno")) s.mno = detail::get_as<std::string>(j.at("mno"), "mno");
  if (j.contains("seed")) s.seed = detail::get_as<std::uint64_t>(j.at("seed"), "seed");
  if (j.contains("service_override")) s.service_override = service_level_from_json(j.at("service_override"), "service_override");
  const auto& base = detail::require(j, "base");
  RunConfig rc;
  if (base.is_string()) {
    rc = load_run_config(base_dir / base.get<std::string>());
  } else {
    rc = run_config_from_json(base, base_dir);
  }
  s.dqn = j.contains("dqn") ? dqn_config_from_json(j.at("dqn")) : rc.dqn;
  s.qlearning = j.contains("qlearning") ? qlearning_config_from_json(j.at("qlearning")) : rc.qlearning;
  out.base = std::move(rc.scenario);
  s.validate();
  if (s.mno) (void)out.base.mno_index(*s.mno);
  return out;
}

inline json to_json(const SweepSpec& s, const Scenario& base) {
  json j = {{"parameter", to_string(s.parameter)},
            {"values", s.values},
            {"replicates", s.replicates},
            {"agent", to_string(s.agent)},
            {"seed", s.seed},
            {"base", {{"scenario", scenario_to_json(base)}}},
            {"dqn", to_json(s.dqn)},
            {"qlearning", to_json(s.qlearning)}};
  if (s.mno) j["mno"] = *s.mno;
  if (s.service_override)
    j["service_override"] = {{"tau_ms", s.service_override->tau_ms}, {"gamma", s.service_override->gamma}};
  return j;
}

}  // namespace mnoswitch::experiments
