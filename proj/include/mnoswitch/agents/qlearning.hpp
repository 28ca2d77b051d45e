#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "mnoswitch/agents/exploration.hpp"
#include "mnoswitch/agents/training_log.hpp"
#include "mnoswitch/dp_oracle.hpp"
#include "mnoswitch/env.hpp"
#include "mnoswitch/policy.hpp"

namespace mnoswitch::agents {

// Time-indexed tabular Q of costs. `learning_rate` is g and `discount` is b
// in Q <- Q + g [R + b min_a' Q(t+1, s', a') - Q].
class QTable {
 public:
  QTable(int horizon, int num_states, int num_actions, double learning_rate, double discount)
      : horizon_(horizon),
        num_states_(num_states),
        num_actions_(num_actions),
        learning_rate_(learning_rate),
        discount_(discount),
        values_(static_cast<std::size_t>(horizon) * static_cast<std::size_t>(num_states) *
                    static_cast<std::size_t>(num_actions),
                0.0) {
    if (!(discount >= 0.0 && discount <= 1.0)) throw ValidationError("discount", "must be in [0, 1]");
    if (!(learning_rate >= 0.0 && learning_rate <= 1.0))
      throw ValidationError("learning_rate", "must be in [0, 1]");
  }

  QTable(const Environment& env, double learning_rate, double discount)
      : QTable(env.horizon(), env.num_states(), env.num_mnos(), learning_rate, discount) {}

  int horizon() const noexcept { return horizon_; }
  int num_states() const noexcept { return num_states_; }
  int num_actions() const noexcept { return num_actions_; }
  double learning_rate() const noexcept { return learning_rate_; }
  double discount() const noexcept { return discount_; }

  std::span<const double> row(int t, int state_index) const {
    return {values_.data() + offset(t, state_index, 0), static_cast<std::size_t>(num_actions_)};
  }
  double get(int t, int state_index, int action) const { return values_[offset(t, state_index, action)]; }
  void set(int t, int state_index, int action, double v) { values_[offset(t, state_index, action)] = v; }

  // min_a Q(t, s, a); zero past the horizon.
  double min_value(int t, int state_index) const {
    if (t > horizon_) return 0.0;
    const auto r = row(t, state_index);
    return r[static_cast<std::size_t>(argmin(r))];
  }

  std::span<const double> values() const noexcept { return values_; }

 private:
  std::size_t offset(int t, int state_index, int action) const {
    if (t < 1 || t > horizon_ || state_index < 0 || state_index >= num_states_ || action < 0 ||
        action >= num_actions_)
      throw ValidationError("q_table", "index out of range");
    return (static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(num_states_) +
            static_cast<std::size_t>(state_index)) *
               static_cast<std::size_t>(num_actions_) +
           static_cast<std::size_t>(action);
  }

  int horizon_;
  int num_states_;
  int num_actions_;
  double learning_rate_;
  double discount_;
  std::vector<double> values_;
};

// One temporal-difference step with an explicit step size. Returns the TD error.
inline double q_update(QTable& table, const Environment& env, const Transition& tr, double step_size) {
  const int s = env.state_index(tr.state);
  const double bootstrap = tr.terminal ? 0.0 : table.min_value(tr.next_state.t, env.state_index(tr.next_state));
  const double q = table.get(tr.state.t, s, tr.action);
  const double td = tr.utility + table.discount() * bootstrap - q;
  table.set(tr.state.t, s, tr.action, q + step_size * td);
  return td;
}

inline double q_update(QTable& table, const Environment& env, const Transition& tr) {
  return q_update(table, env, tr, table.learning_rate());
}

inline Policy greedy_policy(const Environment& env, const QTable& table) {
  Policy p(env.horizon(), env.num_states());
  for (int t = 1; t <= env.horizon(); ++t)
    for (int i = 0; i < env.num_states(); ++i) p.set(t, i, argmin(table.row(t, i)));
  return p;
}

enum class StepSize { constant, inverse_visits };

struct QLearningConfig {
  std::size_t episodes = 2000;
  double learning_rate = 0.1;  // g; with inverse_visits the step is max(g_min, 1/n(t,s,a))
  double min_learning_rate = 0.0;
  StepSize step_size = StepSize::constant;
  double discount = 0.95;  // b
  EpsilonSchedule epsilon{0.8, 0.05, Decay::linear, 1200};

  void validate() const {
    epsilon.validate();
    if (!(discount >= 0.0 && discount <= 1.0)) throw ValidationError("discount", "must be in [0, 1]");
    if (!(learning_rate >= 0.0 && learning_rate <= 1.0))
      throw ValidationError("learning_rate", "must be in [0, 1]");
  }
};

struct QLearningResult {
  QTable table;
  std::vector<EpisodeLog> log;
};

// Epsilon-greedy tabular Q-learning. After each episode the greedy policy is
// scored exactly with evaluate_policy.
inline QLearningResult train_qlearning(const Environment& env, const QLearningConfig& cfg, Rng& rng) {
  cfg.validate();
  QLearningResult out{QTable(env, cfg.learning_rate, cfg.discount), {}};
  std::vector<std::size_t> visits;
  if (cfg.step_size == StepSize::inverse_visits) visits.assign(out.table.values().size(), 0);
  out.log.reserve(cfg.episodes);

  for (std::size_t ep = 0; ep < cfg.episodes; ++ep) {
    const double eps = cfg.epsilon.value(ep);
    State s = env.sample_initial(rng);
    double sq = 0.0;
    int steps = 0;
    while (s.t <= env.horizon()) {
      const int a = select_action(out.table.row(s.t, env.state_index(s)), eps, rng);
      const Transition tr = env.step(s, a, rng);
      double step = cfg.learning_rate;
      if (cfg.step_size == StepSize::inverse_visits) {
        const auto idx = (static_cast<std::size_t>(s.t - 1) * static_cast<std::size_t>(env.num_states()) +
                          static_cast<std::size_t>(env.state_index(s))) *
                             static_cast<std::size_t>(env.num_mnos()) +
                         static_cast<std::size_t>(a);
        step = std::max(cfg.min_learning_rate, 1.0 / static_cast<double>(++visits[idx]));
      }
      const double td = q_update(out.table, env, tr, step);
      sq += td * td;
      ++steps;
      s = tr.next_state;
    }
    out.log.push_back({ep + 1, eps, policy_cost(env, greedy_policy(env, out.table)),
                       steps > 0 ? sq / steps : 0.0});
  }
  return out;
}

}  // namespace mnoswitch::agents
