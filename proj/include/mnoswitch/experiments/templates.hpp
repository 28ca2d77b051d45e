#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "mnoswitch/error.hpp"
#include "mnoswitch/latency.hpp"
#include "mnoswitch/random.hpp"
#include "mnoswitch/scenario.hpp"

namespace mnoswitch::experiments {

// Two-component latency mixture: a body near the mode plus a heavy tail.
struct MixtureProfile {
  double body_mean_ms;
  double body_sd_ms;
  double tail_weight;
  double tail_mean_ms;
  double tail_sd_ms;
};

inline constexpr double kMaxLatencyMs = 1000.0;

// Discretizes the mixture on a `bin_width_ms` grid; bin k carries the mass of
// ((k-1)w, kw] and mass beyond kMaxLatencyMs is folded into the last bin.
inline LatencyDistribution discretize(const MixtureProfile& p, double bin_width_ms = kDefaultBinWidthMs) {
  const auto cdf = [&](double x) {
    const auto phi = [](double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); };
    double v = (1.0 - p.tail_weight) * phi((x - p.body_mean_ms) / p.body_sd_ms);
    if (p.tail_weight > 0.0) v += p.tail_weight * phi((x - p.tail_mean_ms) / p.tail_sd_ms);
    return v;
  };
  const auto bins = static_cast<int>(std::ceil(kMaxLatencyMs / bin_width_ms));
  std::vector<double> lat;
  std::vector<double> probs;
  double prev = 0.0;
  for (int k = 0; k <= bins; ++k) {
    const double edge = k * bin_width_ms;
    const double c = k == bins ? 1.0 : cdf(edge);
    const double mass = c - prev;
    prev = c;
    if (mass < 1e-15) continue;
    lat.push_back(edge);
    probs.push_back(mass);
  }
  double total = 0.0;
  for (double m : probs) total += m;
  for (double& m : probs) m /= total;
  return LatencyDistribution(std::move(lat), std::move(probs));
}

namespace templates {

// The three service levels of the 5GAA use-case table.
inline std::vector<ServiceSpec> table_services() {
  return {{"cross_traffic_left_turn_assist", 100.0, 0.90},
          {"emergency_brake_warning", 120.0, 0.999},
          {"lane_change_warning", 400.0, 0.999}};
}

inline constexpr MixtureProfile kGoodCloud{55.0, 10.0, 0.04, 160.0, 30.0};
inline constexpr MixtureProfile kPoorCloud{95.0, 20.0, 0.12, 250.0, 40.0};
inline constexpr MixtureProfile kGoodFog{22.0, 5.0, 0.0, 0.0, 1.0};
inline constexpr MixtureProfile kLossyFog{40.0, 8.0, 0.02, 180.0, 30.0};

inline MixtureProfile jitter(MixtureProfile p, Rng& rng) {
  const auto u = [&](double lo, double hi) { return lo + (hi - lo) * uniform01(rng); };
  p.body_mean_ms *= u(0.92, 1.08);
  p.body_sd_ms *= u(0.9, 1.1);
  p.tail_weight *= u(0.8, 1.2);
  p.tail_mean_ms *= u(0.92, 1.08);
  return p;
}

// Route of 5 locations traversed as a loop: each slot the vehicle stays with
// probability 1/2 or moves to the next location. The requested service is
// drawn from a per-location mix independent of the previous service.
inline void set_route_chain(Scenario& sc, const std::vector<std::array<double, 3>>& service_mix,
                            double stay = 0.5) {
  const std::size_t nl = sc.locations.size();
  const std::size_t nx = sc.services.size();
  const std::size_t nc = nl * nx;
  sc.context_chain.assign(nc * nc, 0.0);
  for (std::size_t l = 0; l < nl; ++l) {
    for (std::size_t x = 0; x < nx; ++x) {
      const std::size_t row = l * nx + x;
      for (const auto& [next_l, p_l] : {std::pair{l, stay}, std::pair{(l + 1) % nl, 1.0 - stay}})
        for (std::size_t nx2 = 0; nx2 < nx; ++nx2)
          sc.context_chain[row * nc + next_l * nx + nx2] += p_l * service_mix[next_l][nx2];
    }
  }
}

inline Scenario standard_skeleton() {
  Scenario sc;
  sc.locations = {"L1", "L2", "L3", "L4", "L5"};
  sc.services = table_services();
  sc.mnos = {"MNO1", "MNO2"};
  sc.horizon = 20;
  sc.switch_delay_ms = 20.0;
  sc.pricing.cloud = 1.0;
  sc.pricing.fog = {{"MNO1", 3.0}, {"MNO2", 2.5}};
  sc.lambda.assign(20, 5.0);
  const std::vector<std::array<double, 3>> mix{
      {0.5, 0.3, 0.2}, {0.3, 0.3, 0.4}, {0.2, 0.4, 0.4}, {0.4, 0.2, 0.4}, {0.3, 0.4, 0.3}};
  set_route_chain(sc, mix);
  // Start at L1 with the location's service mix and either operator.
  sc.initial_state.assign(sc.num_states(), 0.0);
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t m = 0; m < 2; ++m) sc.initial_state[x * 2 + m] = mix[0][x] * 0.5;
  return sc;
}

// Per-location (cloud, fog) profiles for MNO1 and MNO2. MNO1 has the better
// cloud path and MNO2 the better fog path on L1, L2 and L5. L3 is good for
// both and the roles flip on L4.
struct LocationProfiles {
  MixtureProfile mno1_cloud, mno1_fog, mno2_cloud, mno2_fog;
};

inline std::vector<LocationProfiles> standard_profiles() {
  return {{kGoodCloud, kLossyFog, kPoorCloud, kGoodFog},
          {kGoodCloud, kLossyFog, kPoorCloud, kGoodFog},
          {kGoodCloud, kGoodFog, kGoodCloud, kGoodFog},
          {kPoorCloud, kGoodFog, kGoodCloud, kLossyFog},
          {kGoodCloud, kLossyFog, kPoorCloud, kGoodFog}};
}

inline void fill_catalog(Scenario& sc, const std::vector<LocationProfiles>& profiles, Rng& rng) {
  sc.catalog = LatencyCatalog{};
  for (std::size_t l = 0; l < sc.locations.size(); ++l) {
    const auto& p = profiles[l];
    const auto& loc = sc.locations[l];
    sc.catalog.insert(loc, "MNO1", Tier::cloud, discretize(jitter(p.mno1_cloud, rng)));
    sc.catalog.insert(loc, "MNO1", Tier::fog, discretize(jitter(p.mno1_fog, rng)));
    sc.catalog.insert(loc, "MNO2", Tier::cloud, discretize(jitter(p.mno2_cloud, rng)));
    sc.catalog.insert(loc, "MNO2", Tier::fog, discretize(jitter(p.mno2_fog, rng)));
  }
}

}  // namespace templates

inline const std::vector<std::string>& template_names() {
  static const std::vector<std::string> names{"standard", "symmetric", "single_mno"};
  return names;
}

// Synthetic scenario families.
//   standard   - 5 locations, 3 services, 2 MNOs with crossed cloud/fog
//                quality, T = 20, lambda = 5, d = 20 ms, nu = 1, mu = (3, 2.5)
//   symmetric  - both MNOs share one draw of good cloud and good fog
//                profiles per location, so only prices tell them apart
//   single_mno - standard restricted to MNO1 at L3 (always feasible)
// Latency profiles are jittered from `rng`; draws that break the feasibility
// remark are rejected and redrawn.
inline Scenario generate_scenario(const std::string& name, Rng& rng) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Scenario sc = templates::standard_skeleton();
    auto profiles = templates::standard_profiles();
    if (name == "standard") {
      templates::fill_catalog(sc, profiles, rng);
    } else if (name == "symmetric") {
      for (auto& p : profiles)
        p = {templates::kGoodCloud, templates::kGoodFog, templates::kGoodCloud, templates::kGoodFog};
      templates::fill_catalog(sc, profiles, rng);
      // Same draws for both operators so that only prices differ.
      for (const auto& loc : sc.locations) {
        sc.catalog.insert(loc, "MNO2", Tier::cloud, sc.catalog.at(loc, "MNO1", Tier::cloud));
        sc.catalog.insert(loc, "MNO2", Tier::fog, sc.catalog.at(loc, "MNO1", Tier::fog));
      }
    } else if (name == "single_mno") {
      templates::fill_catalog(sc, profiles, rng);
      LatencyCatalog only;
      for (const auto& loc : sc.locations) {
        only.insert(loc, "MNO1", Tier::cloud, sc.catalog.at("L3", "MNO1", Tier::cloud));
        only.insert(loc, "MNO1", Tier::fog, sc.catalog.at("L3", "MNO1", Tier::fog));
      }
      sc.catalog = std::move(only);
      sc.mnos = {"MNO1"};
      sc.pricing.fog = {{"MNO1", 3.0}};
      std::vector<double> init(sc.num_states(), 0.0);
      for (std::size_t x = 0; x < 3; ++x) init[x] = sc.initial_state[x * 2] * 2.0;
      sc.initial_state = std::move(init);
    } else {
      throw ValidationError("template", "unknown scenario template '" + name + "'");
    }
    try {
      sc.validate();
      return sc;
    } catch (const ValidationError&) {
      continue;
    }
  }
  throw Error("template '" + name + "' produced no feasible scenario in 1000 draws");
}

}  // namespace mnoswitch::experiments
