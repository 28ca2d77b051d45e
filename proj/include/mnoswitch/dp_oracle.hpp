#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "mnoswitch/env.hpp"
#include "mnoswitch/policy.hpp"

namespace mnoswitch {

// Optimal expected remaining cost V_t(s) for t = 1..T+1 and the argmin policy.
// Layer T+1 is the terminal boundary and is identically zero.
class ValueTable {
 public:
  ValueTable() = default;
  ValueTable(int horizon, int num_states)
      : horizon_(horizon),
        num_states_(num_states),
        values_(static_cast<std::size_t>(horizon + 1) * static_cast<std::size_t>(num_states), 0.0),
        policy_(horizon, num_states) {}

  int horizon() const noexcept { return horizon_; }
  double value(int t, int state_index) const { return values_.at(offset(t, state_index)); }
  double& value(int t, int state_index) { return values_.at(offset(t, state_index)); }
  const Policy& policy() const noexcept { return policy_; }
  Policy& policy() noexcept { return policy_; }

 private:
  std::size_t offset(int t, int state_index) const {
    return static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(num_states_) +
           static_cast<std::size_t>(state_index);
  }

  int horizon_ = 0;
  int num_states_ = 0;
  std::vector<double> values_;
  Policy policy_;
};

// E[V_{t+1}(s')] after taking `action` in `s`: s' = <l', x', action>.
inline double expected_next_value(const Environment& env, const ValueTable& table, const State& s,
                                  int action) {
  if (s.t >= env.horizon()) return 0.0;
  double acc = 0.0;
  for (const auto& [c, p] : env.context_successors(env.context_index(s.location, s.service)))
    acc += p * table.value(s.t + 1, c * env.num_mnos() + action);
  return acc;
}

// Q_t(s, a) = R_t(s, a) + E[V_{t+1}(s')].
inline double action_value(const Environment& env, const ValueTable& table, const State& s,
                           int action) {
  return env.expected_utility(s, action) + expected_next_value(env, table, s, action);
}

// Backward induction over t = T..1 with expected workload. Ties go to the
// smallest MNO index.
inline ValueTable solve(const Environment& env) {
  ValueTable table(env.horizon(), env.num_states());
  for (int t = env.horizon(); t >= 1; --t) {
    for (int i = 0; i < env.num_states(); ++i) {
      const State s = env.state_from_index(i, t);
      double best = std::numeric_limits<double>::infinity();
      int best_a = 0;
      for (int a = 0; a < env.num_mnos(); ++a) {
        const double q = action_value(env, table, s, a);
        if (q < best) {
          best = q;
          best_a = a;
        }
      }
      table.value(t, i) = best;
      table.policy().set(t, i, best_a);
    }
  }
  return table;
}

// Exact policy value: the same recursion with the min replaced by the
// policy's action.
inline ValueTable evaluate_policy(const Environment& env, const Policy& policy) {
  if (policy.horizon() != env.horizon() || policy.num_states() != env.num_states())
    throw ValidationError("policy", "shape does not match the scenario");
  ValueTable table(env.horizon(), env.num_states());
  for (int t = env.horizon(); t >= 1; --t) {
    for (int i = 0; i < env.num_states(); ++i) {
      const State s = env.state_from_index(i, t);
      const int a = policy.at(t, i);
      table.value(t, i) = action_value(env, table, s, a);
      table.policy().set(t, i, a);
    }
  }
  return table;
}

inline ValueTable evaluate_policy(const Environment& env, const PolicyFn& policy) {
  return evaluate_policy(env, Policy::from_function(env, policy));
}

// Expected total cost from the scenario's initial distribution.
inline double initial_value(const Environment& env, const ValueTable& table) {
  if (env.horizon() == 0) return 0.0;
  const auto& init = env.scenario().initial_state;
  double acc = 0.0;
  for (int i = 0; i < env.num_states(); ++i)
    if (init[static_cast<std::size_t>(i)] > 0.0) acc += init[static_cast<std::size_t>(i)] * table.value(1, i);
  return acc;
}

inline double policy_cost(const Environment& env, const Policy& policy) {
  return initial_value(env, evaluate_policy(env, policy));
}

}  // namespace mnoswitch
