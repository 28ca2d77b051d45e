#pragma once

#include <cstddef>
#include <vector>

#include "mnoswitch/env.hpp"
#include "mnoswitch/error.hpp"

namespace mnoswitch {

// Deterministic time-indexed policy: one action per (t, <l, x, m>).
class Policy {
 public:
  Policy() = default;
  Policy(int horizon, int num_states, int fill = 0)
      : horizon_(horizon),
        num_states_(num_states),
        actions_(static_cast<std::size_t>(horizon) * static_cast<std::size_t>(num_states), fill) {}

  static Policy constant(const Environment& env, int mno) {
    env.check_action(mno);
    return Policy(env.horizon(), env.num_states(), mno);
  }

  template <typename Fn>
  static Policy from_function(const Environment& env, Fn&& fn) {
    Policy p(env.horizon(), env.num_states());
    for (int t = 1; t <= env.horizon(); ++t)
      for (int i = 0; i < env.num_states(); ++i) p.set(t, i, fn(env.state_from_index(i, t)));
    return p;
  }

  int horizon() const noexcept { return horizon_; }
  int num_states() const noexcept { return num_states_; }

  int at(int t, int state_index) const { return actions_[offset(t, state_index)]; }
  void set(int t, int state_index, int action) { actions_[offset(t, state_index)] = action; }

  bool operator==(const Policy&) const = default;

 private:
  std::size_t offset(int t, int state_index) const {
    if (t < 1 || t > horizon_ || state_index < 0 || state_index >= num_states_)
      throw ValidationError("policy", "index out of range");
    return static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(num_states_) +
           static_cast<std::size_t>(state_index);
  }

  int horizon_ = 0;
  int num_states_ = 0;
  std::vector<int> actions_;
};

// Adapts a Policy to the callable form used by rollouts.
inline PolicyFn as_function(const Environment& env, const Policy& policy) {
  return [&env, &policy](const State& s) { return policy.at(s.t, env.state_index(s)); };
}

}  // namespace mnoswitch
