#pragma once

#include <algorithm>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mnoswitch/scenario.hpp"

namespace mnoswitch::testing {

// Two-point latency distribution: mass `p_fast` at `fast_ms`, rest at 900 ms.
// Confidence at any tau in [fast_ms, 900) is exactly p_fast.
inline LatencyDistribution two_point(double p_fast, double fast_ms = 10.0) {
  if (p_fast >= 1.0) return LatencyDistribution::point(fast_ms);
  if (p_fast <= 0.0) return LatencyDistribution::point(900.0);
  return LatencyDistribution({fast_ms, 900.0}, {p_fast, 1.0 - p_fast});
}

struct Cell {
  double f_cloud = 1.0;
  double f_fog = 1.0;
};

// Compact scenario builder for tests. Locations are "L0".., services "S0"..,
// MNOs "M0"... Defaults: one service 100 ms / 0.9, identity context chain,
// uniform initial distribution, cloud price 1, fog price 3 for every MNO.
struct ScenarioBuilder {
  int locations = 1;
  int mnos = 1;
  std::vector<ServiceSpec> services{{"S0", 100.0, 0.9}};
  int horizon = 1;
  double lambda = 10.0;
  double delay_ms = 0.0;
  double cloud_price = 1.0;
  std::vector<double> fog_prices;  // empty: 3 for all
  std::function<Cell(int location, int mno)> cell = [](int, int) { return Cell{}; };
  std::vector<double> chain;       // empty: identity
  std::vector<double> initial;     // empty: uniform
  WorkloadModel workload = WorkloadModel::poisson;

  Scenario build() const {
    Scenario sc;
    for (int l = 0; l < locations; ++l) sc.locations.push_back("L" + std::to_string(l));
    for (int m = 0; m < mnos; ++m) sc.mnos.push_back("M" + std::to_string(m));
    sc.services = services;
    sc.horizon = horizon;
    sc.switch_delay_ms = delay_ms;
    sc.pricing.cloud = cloud_price;
    for (int m = 0; m < mnos; ++m)
      sc.pricing.fog[sc.mnos[static_cast<std::size_t>(m)]] =
          fog_prices.empty() ? 3.0 : fog_prices[static_cast<std::size_t>(m)];
    sc.lambda.assign(static_cast<std::size_t>(horizon), lambda);
    sc.workload = workload;
    const std::size_t nc = sc.num_contexts();
    if (chain.empty()) {
      sc.context_chain.assign(nc * nc, 0.0);
      for (std::size_t i = 0; i < nc; ++i) sc.context_chain[i * nc + i] = 1.0;
    } else {
      sc.context_chain = chain;
    }
    sc.initial_state = initial.empty() ? std::vector<double>(sc.num_states(), 1.0 / static_cast<double>(sc.num_states()))
                                       : initial;
    // Per-service confidences are realized with per-(location, mno) two-point
    // distributions, so a cell's values apply at every tau in [10, 900).
    for (int l = 0; l < locations; ++l) {
      for (int m = 0; m < mnos; ++m) {
        const Cell c = cell(l, m);
        sc.catalog.insert(sc.locations[static_cast<std::size_t>(l)], sc.mnos[static_cast<std::size_t>(m)], Tier::cloud,
                          two_point(c.f_cloud));
        sc.catalog.insert(sc.locations[static_cast<std::size_t>(l)], sc.mnos[static_cast<std::size_t>(m)], Tier::fog,
                          two_point(c.f_fog));
      }
    }
    return sc;
  }
};

// Three locations, two services and a deterministic 6-cycle context chain
// (l, x) -> (l + 1, 1 - x). Per-slot rates vary with t so that enumeration
// exercises the time index. Supports up to three MNOs.
inline Scenario enumerable_scenario(int mnos, int horizon, double delay) {
  ScenarioBuilder b;
  b.locations = 3;
  b.mnos = mnos;
  b.horizon = horizon;
  b.delay_ms = delay;
  b.fog_prices = {3.0, 2.5, 4.0};
  b.fog_prices.resize(static_cast<std::size_t>(mnos));
  b.services = {{"S0", 100.0, 0.9}, {"S1", 400.0, 0.99}};
  b.cell = [](int l, int m) {
    const double q = 0.55 + 0.13 * ((l + 2 * m) % 4);
    return Cell{q, std::min(1.0, q + 0.3)};
  };
  // (l, x) -> (l + 1, 1 - x): a 6-cycle through every context.
  const int nc = 6;
  b.chain.assign(nc * nc, 0.0);
  for (int c = 0; c < nc; ++c) {
    const int l = c / 2, x = c % 2;
    b.chain[static_cast<std::size_t>(c * nc + ((l + 1) % 3) * 2 + (1 - x))] = 1.0;
  }
  Scenario sc = b.build();
  for (std::size_t t = 0; t < sc.lambda.size(); ++t) sc.lambda[t] = 2.0 + static_cast<double>(t % 3);
  return sc;
}

}  // namespace mnoswitch::testing
