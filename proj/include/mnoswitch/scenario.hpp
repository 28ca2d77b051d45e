#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mnoswitch/assignment.hpp"
#include "mnoswitch/error.hpp"
#include "mnoswitch/latency.hpp"

namespace mnoswitch {

inline constexpr double kDefaultPenaltyFactor = 10.0;

// How the per-slot workload is drawn: Poisson(lambda_t), or exactly lambda_t.
enum class WorkloadModel { poisson, fixed };

// Full description of one finite-horizon MNO switching problem.
//
// Contexts are (location, service) pairs indexed as l * |X| + x. The context
// chain is a row-major |L||X| x |L||X| matrix of Pr(x', l' | x, l). The initial
// distribution is indexed like State without t: (l * |X| + x) * |M| + m.
struct Scenario {
  std::vector<std::string> locations;
  std::vector<ServiceSpec> services;
  std::vector<std::string> mnos;
  int horizon = 1;
  double switch_delay_ms = 0.0;
  Pricing pricing;
  LatencyCatalog catalog;
  std::vector<double> context_chain;
  std::vector<double> lambda;  // one rate per slot, length == horizon
  std::vector<double> initial_state;
  double penalty_factor = kDefaultPenaltyFactor;
  WorkloadModel workload = WorkloadModel::poisson;

  std::size_t num_contexts() const { return locations.size() * services.size(); }
  std::size_t num_states() const { return num_contexts() * mnos.size(); }

  int location_index(const std::string& id) const { return index_of(locations, id, "locations"); }
  int mno_index(const std::string& id) const { return index_of(mnos, id, "mnos"); }
  int service_index(const std::string& id) const {
    for (std::size_t i = 0; i < services.size(); ++i)
      if (services[i].id == id) return static_cast<int>(i);
    throw ValidationError("services", "unknown service '" + id + "'");
  }

  // Structural checks plus the feasibility remark: at every (l, x) at least
  // one MNO meets the confidence floor when no switch happens.
  void validate() const;

 private:
  static int index_of(const std::vector<std::string>& v, const std::string& id,
                      const std::string& key) {
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] == id) return static_cast<int>(i);
    throw ValidationError(key, "unknown id '" + id + "'");
  }
};

namespace detail {

inline void require_unique(const std::vector<std::string>& ids, const std::string& key) {
  if (ids.empty()) throw ValidationError(key, "must not be empty");
  for (std::size_t i = 0; i < ids.size(); ++i)
    for (std::size_t j = i + 1; j < ids.size(); ++j)
      if (ids[i] == ids[j]) throw ValidationError(key, "duplicate id '" + ids[i] + "'");
}

inline void require_distribution(const std::vector<double>& p, const std::string& key) {
  double sum = 0.0;
  for (double v : p) {
    if (!std::isfinite(v) || v < 0.0) throw ValidationError(key, "entries must be finite and >= 0");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kProbabilityTolerance)
    throw ValidationError(key, "must sum to 1 (got " + std::to_string(sum) + ")");
}

}  // namespace detail

inline void Scenario::validate() const {
  detail::require_unique(locations, "locations");
  detail::require_unique(mnos, "mnos");
  std::vector<std::string> service_ids;
  for (const auto& s : services) {
    s.validate();
    service_ids.push_back(s.id);
  }
  detail::require_unique(service_ids, "services");
  if (horizon < 0) throw ValidationError("horizon", "must be >= 0");
  if (!(switch_delay_ms >= 0.0) || !std::isfinite(switch_delay_ms))
    throw ValidationError("switch_delay_ms", "must be >= 0");
  if (!(penalty_factor > 0.0)) throw ValidationError("penalty_factor", "must be > 0");
  pricing.validate();
  for (const auto& m : mnos) (void)pricing.fog_price(m);

  const std::size_t nc = num_contexts();
  if (context_chain.size() != nc * nc)
    throw ValidationError("context_chain", "expected a " + std::to_string(nc) + "x" +
                                               std::to_string(nc) + " matrix");
  for (std::size_t r = 0; r < nc; ++r) {
    const std::vector<double> row(context_chain.begin() + static_cast<std::ptrdiff_t>(r * nc),
                                  context_chain.begin() + static_cast<std::ptrdiff_t>((r + 1) * nc));
    detail::require_distribution(row, "context_chain row " + std::to_string(r));
  }
  if (lambda.size() != static_cast<std::size_t>(horizon))
    throw ValidationError("lambda", "expected one rate per slot");
  for (double l : lambda)
    if (!std::isfinite(l) || l < 0.0) throw ValidationError("lambda", "rates must be >= 0");
  if (initial_state.size() != num_states())
    throw ValidationError("initial_state", "expected one probability per (location, service, mno)");
  detail::require_distribution(initial_state, "initial_state");

  catalog.require_complete();
  for (const auto& loc : locations) {
    for (const auto& spec : services) {
      bool any = false;
      for (const auto& m : mnos) {
        const double fc = confidence(catalog.at(loc, m, Tier::cloud), spec.tau_ms);
        const double ff = confidence(catalog.at(loc, m, Tier::fog), spec.tau_ms);
        any = any || alpha_star(fc, ff, spec.gamma).feasible;
      }
      if (!any)
        throw ValidationError("distributions", "no MNO meets service '" + spec.id +
                                                   "' at location '" + loc +
                                                   "' (feasibility remark violated)");
    }
  }
}

}  // namespace mnoswitch
