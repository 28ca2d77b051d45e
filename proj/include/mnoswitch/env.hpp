#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mnoswitch/assignment.hpp"
#include "mnoswitch/error.hpp"
#include "mnoswitch/latency.hpp"
#include "mnoswitch/random.hpp"
#include "mnoswitch/scenario.hpp"

namespace mnoswitch {

// <l, x, m> plus the slot index t in 1..T. `mno` is the operator held when the
// slot begins; the action picks the operator used during the slot.
struct State {
  int location = 0;
  int service = 0;
  int mno = 0;
  int t = 1;

  bool operator==(const State&) const = default;
};

struct Transition {
  State state;
  int action = 0;
  double utility = 0.0;
  State next_state;
  double workload = 0.0;
  bool terminal = false;  // next_state.t == T + 1
};

// Latency bound left for the service when the slot starts with a switch.
inline double effective_tau(const ServiceSpec& spec, bool switching, double delay_ms) {
  return switching ? std::max(0.0, spec.tau_ms - delay_ms) : spec.tau_ms;
}

using PolicyFn = std::function<int(const State&)>;

struct RolloutStats {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t episodes = 0;
};

// Immutable model of a validated scenario. Per-slot cost is linear in the
// workload, so it is cached as a rate per workload unit for every
// (context, mno held, action).
class Environment {
 public:
  explicit Environment(Scenario scenario) : sc_(std::move(scenario)) {
    sc_.validate();
    nl_ = static_cast<int>(sc_.locations.size());
    nx_ = static_cast<int>(sc_.services.size());
    nm_ = static_cast<int>(sc_.mnos.size());
    penalty_rate_ = sc_.pricing.max_fog_price() * sc_.penalty_factor;

    const std::size_t nc = sc_.num_contexts();
    splits_.resize(nc * static_cast<std::size_t>(nm_) * 2);
    for (int l = 0; l < nl_; ++l) {
      for (int x = 0; x < nx_; ++x) {
        const auto& spec = sc_.services[static_cast<std::size_t>(x)];
        for (int a = 0; a < nm_; ++a) {
          for (int sw = 0; sw < 2; ++sw) {
            const double tau = effective_tau(spec, sw == 1, sc_.switch_delay_ms);
            const auto& loc = sc_.locations[static_cast<std::size_t>(l)];
            const auto& mno = sc_.mnos[static_cast<std::size_t>(a)];
            const double fc = confidence(sc_.catalog.at(loc, mno, Tier::cloud), tau);
            const double ff = confidence(sc_.catalog.at(loc, mno, Tier::fog), tau);
            splits_[split_index(l * nx_ + x, a, sw == 1)] = alpha_star(fc, ff, spec.gamma);
          }
        }
      }
    }

    successors_.resize(nc);
    for (std::size_t r = 0; r < nc; ++r)
      for (std::size_t c = 0; c < nc; ++c)
        if (const double p = sc_.context_chain[r * nc + c]; p > 0.0)
          successors_[r].push_back({static_cast<int>(c), p});

    initial_cdf_.resize(sc_.initial_state.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < initial_cdf_.size(); ++i) {
      acc += sc_.initial_state[i];
      initial_cdf_[i] = acc;
    }
  }

  const Scenario& scenario() const noexcept { return sc_; }
  int num_locations() const noexcept { return nl_; }
  int num_services() const noexcept { return nx_; }
  int num_mnos() const noexcept { return nm_; }
  int num_contexts() const noexcept { return nl_ * nx_; }
  int num_states() const noexcept { return nl_ * nx_ * nm_; }
  int horizon() const noexcept { return sc_.horizon; }
  double lambda(int t) const { return sc_.lambda.at(static_cast<std::size_t>(t - 1)); }
  double penalty_rate() const noexcept { return penalty_rate_; }

  int context_index(int location, int service) const { return location * nx_ + service; }

  // Index of <l, x, m> ignoring t.
  int state_index(const State& s) const { return context_index(s.location, s.service) * nm_ + s.mno; }

  State state_from_index(int index, int t) const {
    const int m = index % nm_;
    const int c = index / nm_;
    return {c / nx_, c % nx_, m, t};
  }

  void check_state(const State& s) const {
    if (s.location < 0 || s.location >= nl_) throw ValidationError("state.location", "out of range");
    if (s.service < 0 || s.service >= nx_) throw ValidationError("state.service", "out of range");
    if (s.mno < 0 || s.mno >= nm_) throw ValidationError("state.mno", "out of range");
    if (s.t < 1 || s.t > sc_.horizon + 1) throw ValidationError("state.t", "out of range");
  }

  void check_action(int action) const {
    if (action < 0 || action >= nm_) throw ValidationError("action", "unknown MNO index");
  }

  // Optimal fog/cloud split for taking `action` from `state`.
  const Split& split(const State& s, int action) const {
    return splits_[split_index(context_index(s.location, s.service), action, action != s.mno)];
  }

  // Cost per unit of workload; the penalty rate when the split is infeasible.
  double cost_rate(const State& s, int action) const {
    const Split& sp = split(s, action);
    if (!sp.feasible) return penalty_rate_;
    const auto& mno = sc_.mnos[static_cast<std::size_t>(action)];
    return sc_.pricing.fog_price(mno) * sp.alpha + sc_.pricing.cloud * (1.0 - sp.alpha);
  }

  // R_t(s, a) with the expected workload lambda_t.
  double expected_utility(const State& s, int action) const {
    check_state(s);
    check_action(action);
    if (s.t > sc_.horizon) throw ValidationError("state.t", "terminal state has no utility");
    return lambda(s.t) * cost_rate(s, action);
  }

  // Utility for a realized workload. Infeasible actions pay the penalty
  // mu_max * lambda_t * penalty_factor regardless of the draw.
  double realized_utility(const State& s, int action, double workload) const {
    const Split& sp = split(s, action);
    if (!sp.feasible) return penalty_rate_ * lambda(s.t);
    return slot_cost(sc_.pricing, sc_.mnos[static_cast<std::size_t>(action)], sp.alpha, workload);
  }

  // Sparse row of the context chain.
  std::span<const std::pair<int, double>> context_successors(int context) const {
    return successors_.at(static_cast<std::size_t>(context));
  }

  Transition step(const State& s, int action, Rng& rng) const {
    check_state(s);
    check_action(action);
    if (s.t > sc_.horizon) throw ValidationError("state.t", "cannot step a terminal state");
    Transition tr;
    tr.state = s;
    tr.action = action;
    tr.workload = sc_.workload == WorkloadModel::fixed ? lambda(s.t)
                                                       : static_cast<double>(poisson(rng, lambda(s.t)));
    tr.utility = realized_utility(s, action, tr.workload);
    const int next_c = sample_successor(context_index(s.location, s.service), rng);
    tr.next_state = {next_c / nx_, next_c % nx_, action, s.t + 1};
    tr.terminal = tr.next_state.t > sc_.horizon;
    return tr;
  }

  State sample_initial(Rng& rng) const {
    const double u = uniform01(rng);
    auto it = std::upper_bound(initial_cdf_.begin(), initial_cdf_.end(), u);
    auto idx = static_cast<int>(it - initial_cdf_.begin());
    idx = std::min(idx, num_states() - 1);
    while (sc_.initial_state[static_cast<std::size_t>(idx)] == 0.0 && idx > 0) --idx;
    return state_from_index(idx, 1);
  }

  // Monte Carlo estimate of the policy's expected total cost.
  RolloutStats rollout_cost(const PolicyFn& policy, std::size_t episodes, Rng& rng) const {
    RolloutStats out;
    out.episodes = episodes;
    if (episodes == 0 || sc_.horizon == 0) return out;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t e = 0; e < episodes; ++e) {
      State s = sample_initial(rng);
      double total = 0.0;
      while (s.t <= sc_.horizon) {
        const Transition tr = step(s, policy(s), rng);
        total += tr.utility;
        s = tr.next_state;
      }
      sum += total;
      sum_sq += total * total;
    }
    const auto n = static_cast<double>(episodes);
    out.mean = sum / n;
    if (episodes > 1) {
      const double var = std::max(0.0, (sum_sq - n * out.mean * out.mean) / (n - 1.0));
      out.std_error = std::sqrt(var / n);
    }
    return out;
  }

 private:
  std::size_t split_index(int context, int action, bool switching) const {
    return (static_cast<std::size_t>(context) * static_cast<std::size_t>(nm_) +
            static_cast<std::size_t>(action)) * 2 + (switching ? 1 : 0);
  }

  int sample_successor(int context, Rng& rng) const {
    const auto& row = successors_[static_cast<std::size_t>(context)];
    double u = uniform01(rng);
    for (const auto& [c, p] : row) {
      if (u < p) return c;
      u -= p;
    }
    return row.back().first;
  }

  Scenario sc_;
  int nl_ = 0;
  int nx_ = 0;
  int nm_ = 0;
  double penalty_rate_ = 0.0;
  std::vector<Split> splits_;
  std::vector<std::vector<std::pair<int, double>>> successors_;
  std::vector<double> initial_cdf_;
};

}  // namespace mnoswitch
