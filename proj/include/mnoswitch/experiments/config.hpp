#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "mnoswitch/agents/dqn.hpp"
#include "mnoswitch/agents/qlearning.hpp"
#include "mnoswitch/error.hpp"
#include "mnoswitch/experiments/scenario_io.hpp"
#include "mnoswitch/experiments/templates.hpp"
#include "mnoswitch/scenario.hpp"

namespace mnoswitch::experiments {

// A run configuration: where the scenario comes from plus agent settings.
// Accepted scenario sources, in order: "scenario" (inline document),
// "scenario_file" (path), "template" (+ optional "template_seed"). A document
// with a top-level "locations" key is treated as a bare scenario.
struct RunConfig {
  Scenario scenario;
  agents::DqnConfig dqn;
  agents::QLearningConfig qlearning;
  json source;  // scenario document as resolved
};

namespace detail {

template <typename T>
void read_opt(const json& j, const char* key, T& out, const std::string& prefix) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(prefix + key, std::string("wrong type: ") + e.what());
  }
}

inline agents::EpsilonSchedule read_epsilon(const json& j, std::size_t episodes, const std::string& prefix) {
  agents::EpsilonSchedule e;
  e.horizon = static_cast<std::size_t>(0.6 * static_cast<double>(episodes));
  if (!j.contains("epsilon")) return e;
  const auto& ej = j.at("epsilon");
  const std::string p = prefix + "epsilon.";
  read_opt(ej, "start", e.start, p);
  read_opt(ej, "end", e.end, p);
  read_opt(ej, "decay_episodes", e.horizon, p);
  if (ej.contains("decay")) e.decay = agents::parse_decay(ej.at("decay").get<std::string>());
  e.validate();
  return e;
}

inline json epsilon_json(const agents::EpsilonSchedule& e) {
  return {{"start", e.start}, {"end", e.end}, {"decay", agents::to_string(e.decay)}, {"decay_episodes", e.horizon}};
}

}  // namespace detail

inline agents::DqnConfig dqn_config_from_json(const json& j) {
  agents::DqnConfig c;
  const std::string p = "dqn.";
  detail::read_opt(j, "episodes", c.episodes, p);
  detail::read_opt(j, "hidden", c.hidden, p);
  if (j.contains("activation")) c.activation = nn::parse_activation(j.at("activation").get<std::string>());
  detail::read_opt(j, "minibatch", c.minibatch, p);
  detail::read_opt(j, "sync_period", c.sync_period, p);
  detail::read_opt(j, "discount", c.discount, p);
  detail::read_opt(j, "learning_rate", c.learning_rate, p);
  detail::read_opt(j, "replay_capacity", c.replay_capacity, p);
  detail::read_opt(j, "updates_per_episode", c.updates_per_episode, p);
  detail::read_opt(j, "include_time_feature", c.include_time_feature, p);
  if (j.contains("target_mode")) c.target_mode = agents::parse_target_mode(j.at("target_mode").get<std::string>());
  c.epsilon = detail::read_epsilon(j, c.episodes, p);
  c.validate();
  return c;
}

inline json to_json(const agents::DqnConfig& c) {
  return {{"episodes", c.episodes},
          {"hidden", c.hidden},
          {"activation", nn::to_string(c.activation)},
          {"minibatch", c.minibatch},
          {"sync_period", c.sync_period},
          {"discount", c.discount},
          {"learning_rate", c.learning_rate},
          {"replay_capacity", c.replay_capacity},
          {"updates_per_episode", c.updates_per_episode},
          {"include_time_feature", c.include_time_feature},
          {"target_mode", agents::to_string(c.target_mode)},
          {"epsilon", detail::epsilon_json(c.epsilon)}};
}

inline agents::QLearningConfig qlearning_config_from_json(const json& j) {
  agents::QLearningConfig c;
  const std::string p = "qlearning.";
  detail::read_opt(j, "episodes", c.episodes, p);
  detail::read_opt(j, "learning_rate", c.learning_rate, p);
  detail::read_opt(j, "min_learning_rate", c.min_learning_rate, p);
  detail::read_opt(j, "discount", c.discount, p);
  if (j.contains("step_size")) {
    const auto s = j.at("step_size").get<std::string>();
    if (s == "constant") {
      c.step_size = agents::StepSize::constant;
    } else if (s == "inverse_visits") {
      c.step_size = agents::StepSize::inverse_visits;
    } else {
      throw ValidationError("qlearning.step_size", "expected constant or inverse_visits");
    }
  }
  c.epsilon = detail::read_epsilon(j, c.episodes, p);
  c.validate();
  return c;
}

inline json to_json(const agents::QLearningConfig& c) {
  return {{"episodes", c.episodes},
          {"learning_rate", c.learning_rate},
          {"min_learning_rate", c.min_learning_rate},
          {"discount", c.discount},
          {"step_size", c.step_size == agents::StepSize::constant ? "constant" : "inverse_visits"},
          {"epsilon", detail::epsilon_json(c.epsilon)}};
}

inline Scenario scenario_from_source(const json& j, const std::filesystem::path& base_dir) {
  if (j.contains("locations")) return scenario_from_json(j, base_dir);
  if (j.contains("scenario")) return scenario_from_json(j.at("scenario"), base_dir);
  if (j.contains("scenario_file")) {
    const auto path = base_dir / j.at("scenario_file").get<std::string>();
    return load_scenario(path);
  }
  if (j.contains("template")) {
    std::uint64_t seed = 1;
    detail::read_opt(j, "template_seed", seed, "");
    Rng rng(seed);
    return generate_scenario(j.at("template").get<std::string>(), rng);
  }
  throw ValidationError("scenario", "config needs one of scenario, scenario_file, template");
}

inline RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ValidationError("config", "expected a JSON object");
  RunConfig rc;
  rc.scenario = scenario_from_source(j, base_dir);
  if (j.contains("dqn")) rc.dqn = dqn_config_from_json(j.at("dqn"));
  if (j.contains("qlearning")) rc.qlearning = qlearning_config_from_json(j.at("qlearning"));
  rc.source = scenario_to_json(rc.scenario);
  return rc;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  return run_config_from_json(load_json_file(path), path.parent_path());
}

inline json to_json(const RunConfig& rc) {
  return {{"scenario", rc.source}, {"dqn", to_json(rc.dqn)}, {"qlearning", to_json(rc.qlearning)}};
}

}  // namespace mnoswitch::experiments
