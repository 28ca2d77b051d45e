#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "mnoswitch/dp_oracle.hpp"
#include "mnoswitch/env.hpp"
#include "mnoswitch/policy.hpp"

namespace mnoswitch::experiments {

// Costs of one configuration across replicates.
struct PointResult {
  std::string parameter;
  std::string value;
  std::string agent;
  std::vector<std::uint64_t> seeds;
  std::vector<double> costs;
  double mean = 0.0;
  double std_error = 0.0;

  void summarize() {
    const auto n = static_cast<double>(costs.size());
    if (costs.empty()) return;
    double sum = 0.0;
    for (double c : costs) sum += c;
    mean = sum / n;
    double ss = 0.0;
    for (double c : costs) ss += (c - mean) * (c - mean);
    std_error = costs.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  }
};

struct RunResult {
  std::vector<PointResult> points;
};

// Exact cost of always connecting to `mno`. Infeasible slots pay the penalty.
inline RunResult run_fixed_mno_baseline(const Environment& env, int mno) {
  PointResult p;
  p.parameter = "baseline";
  p.value = env.scenario().mnos.at(static_cast<std::size_t>(mno));
  p.agent = "fixed-mno";
  p.costs.push_back(policy_cost(env, Policy::constant(env, mno)));
  p.seeds.push_back(0);
  p.summarize();
  return {{p}};
}

// Smallest constant-MNO cost over all operators.
inline double best_fixed_mno_cost(const Environment& env) {
  double best = INFINITY;
  for (int m = 0; m < env.num_mnos(); ++m) best = std::min(best, policy_cost(env, Policy::constant(env, m)));
  return best;
}

struct WorkloadShares {
  std::vector<double> fog;    // expected workload sent to each MNO's fog nodes
  std::vector<double> total;  // expected workload carried by each MNO
  double infeasible_slots = 0.0;
};

// Expected per-MNO workload under `policy`, from the state occupancy measure.
inline WorkloadShares expected_workload(const Environment& env, const Policy& policy) {
  WorkloadShares out;
  out.fog.assign(static_cast<std::size_t>(env.num_mnos()), 0.0);
  out.total.assign(static_cast<std::size_t>(env.num_mnos()), 0.0);
  std::vector<double> occ = env.scenario().initial_state;
  std::vector<double> next(occ.size());
  for (int t = 1; t <= env.horizon(); ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int i = 0; i < env.num_states(); ++i) {
      const double p = occ[static_cast<std::size_t>(i)];
      if (p == 0.0) continue;
      const State s = env.state_from_index(i, t);
      const int a = policy.at(t, i);
      const Split& sp = env.split(s, a);
      const double w = p * env.lambda(t);
      out.total[static_cast<std::size_t>(a)] += w;
      if (sp.feasible) {
        out.fog[static_cast<std::size_t>(a)] += w * sp.alpha;
      } else {
        out.infeasible_slots += p;
      }
      for (const auto& [c, pc] : env.context_successors(env.context_index(s.location, s.service)))
        next[static_cast<std::size_t>(c * env.num_mnos() + a)] += p * pc;
    }
    occ.swap(next);
  }
  return out;
}

}  // namespace mnoswitch::experiments
