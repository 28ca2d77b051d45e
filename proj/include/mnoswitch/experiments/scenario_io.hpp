#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mnoswitch/error.hpp"
#include "mnoswitch/latency.hpp"
#include "mnoswitch/scenario.hpp"

namespace mnoswitch::experiments {

using nlohmann::json;

namespace detail {

inline const json& require(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(key, "missing required key");
  return j.at(key);
}

template <typename T>
T get_as(const json& j, const std::string& key) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(key, std::string("wrong type: ") + e.what());
  }
}

template <typename T>
T require_as(const json& j, const std::string& key) {
  return get_as<T>(require(j, key), key);
}

}  // namespace detail

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 0xf];
  return s;
}

inline json distribution_entry(const std::string& loc, const std::string& mno, Tier tier,
                               const LatencyDistribution& d) {
  return {{"location", loc},
          {"mno", mno},
          {"tier", to_string(tier)},
          {"bins", std::vector<double>(d.latencies().begin(), d.latencies().end())},
          {"probs", std::vector<double>(d.probs().begin(), d.probs().end())}};
}

inline void read_distribution_entries(const json& entries, LatencyCatalog& catalog,
                                      const std::string& key) {
  if (!entries.is_array()) throw ValidationError(key, "expected an array of distributions");
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    const std::string k = key + "[" + std::to_string(i) + "]";
    const auto loc = detail::require_as<std::string>(e, "location");
    const auto mno = detail::require_as<std::string>(e, "mno");
    const auto tier = parse_tier(detail::require_as<std::string>(e, "tier"));
    try {
      catalog.insert(loc, mno, tier,
                     LatencyDistribution(detail::require_as<std::vector<double>>(e, "bins"),
                                         detail::require_as<std::vector<double>>(e, "probs")));
    } catch (const ValidationError& err) {
      throw ValidationError(k + "." + err.key(), err.what());
    }
  }
}

// Catalog file as written by `ingest`.
inline json catalog_to_json(const LatencyCatalog& catalog, double bin_width_ms) {
  json entries = json::array();
  for (const auto& [key, dist] : catalog) {
    const auto& [loc, mno, tier] = key;
    entries.push_back(distribution_entry(loc, mno, tier, dist));
  }
  return {{"format", "mnoswitch-catalog-v1"}, {"bin_width_ms", bin_width_ms}, {"distributions", entries}};
}

inline LatencyCatalog catalog_from_json(const json& j) {
  LatencyCatalog catalog;
  read_distribution_entries(detail::require(j, "distributions"), catalog, "distributions");
  return catalog;
}

inline json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string(), std::string("invalid JSON: ") + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

inline json scenario_to_json(const Scenario& sc) {
  json services = json::array();
  for (const auto& s : sc.services) services.push_back({{"id", s.id}, {"tau_ms", s.tau_ms}, {"gamma", s.gamma}});
  json legend = json::array();
  for (const auto& l : sc.locations)
    for (const auto& s : sc.services) legend.push_back({{"location", l}, {"service", s.id}});
  const std::size_t nc = sc.num_contexts();
  json matrix = json::array();
  for (std::size_t r = 0; r < nc; ++r)
    matrix.push_back(std::vector<double>(sc.context_chain.begin() + static_cast<std::ptrdiff_t>(r * nc),
                                         sc.context_chain.begin() + static_cast<std::ptrdiff_t>((r + 1) * nc)));
  json initial = json::array();
  const std::size_t nm = sc.mnos.size();
  for (std::size_t i = 0; i < sc.initial_state.size(); ++i) {
    if (sc.initial_state[i] == 0.0) continue;
    const std::size_t c = i / nm;
    initial.push_back({{"location", sc.locations[c / sc.services.size()]},
                       {"service", sc.services[c % sc.services.size()].id},
                       {"mno", sc.mnos[i % nm]},
                       {"prob", sc.initial_state[i]}});
  }
  json dists = json::array();
  for (const auto& [key, dist] : sc.catalog) {
    const auto& [loc, mno, tier] = key;
    dists.push_back(distribution_entry(loc, mno, tier, dist));
  }
  return {{"locations", sc.locations},
          {"services", services},
          {"mnos", sc.mnos},
          {"horizon", sc.horizon},
          {"switch_delay_ms", sc.switch_delay_ms},
          {"pricing", {{"cloud", sc.pricing.cloud}, {"fog", sc.pricing.fog}}},
          {"context_chain", {{"legend", legend}, {"matrix", matrix}}},
          {"lambda", sc.lambda},
          {"distributions", dists},
          {"initial_state", initial},
          {"penalty_factor", sc.penalty_factor},
          {"workload", sc.workload == WorkloadModel::fixed ? "fixed" : "poisson"}};
}

// Parses and validates a scenario document. Catalog references inside
// `distributions` resolve relative to `base_dir`.
inline Scenario scenario_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  using detail::require;
  using detail::require_as;
  if (!j.is_object()) throw ValidationError("scenario", "expected a JSON object");
  Scenario sc;
  sc.locations = require_as<std::vector<std::string>>(j, "locations");
  sc.mnos = require_as<std::vector<std::string>>(j, "mnos");
  const auto& services = require(j, "services");
  if (!services.is_array()) throw ValidationError("services", "expected an array");
  for (const auto& s : services)
    sc.services.push_back({require_as<std::string>(s, "id"), require_as<double>(s, "tau_ms"),
                           require_as<double>(s, "gamma")});
  sc.horizon = require_as<int>(j, "horizon");
  sc.switch_delay_ms = require_as<double>(j, "switch_delay_ms");
  if (j.contains("workload")) {
    const auto w = detail::get_as<std::string>(j.at("workload"), "workload");
    if (w == "poisson") {
      sc.workload = WorkloadModel::poisson;
    } else if (w == "fixed") {
      sc.workload = WorkloadModel::fixed;
    } else {
      throw ValidationError("workload", "expected poisson or fixed");
    }
  }
  if (j.contains("penalty_factor")) sc.penalty_factor = detail::get_as<double>(j.at("penalty_factor"), "penalty_factor");

  const auto& pricing = require(j, "pricing");
  sc.pricing.cloud = require_as<double>(pricing, "cloud");
  const auto& fog = require(pricing, "fog");
  if (fog.is_object()) {
    sc.pricing.fog = detail::get_as<std::map<std::string, double>>(fog, "pricing.fog");
  } else if (fog.is_array()) {
    const auto v = detail::get_as<std::vector<double>>(fog, "pricing.fog");
    if (v.size() != sc.mnos.size()) throw ValidationError("pricing.fog", "expected one price per mno");
    for (std::size_t i = 0; i < v.size(); ++i) sc.pricing.fog[sc.mnos[i]] = v[i];
  } else {
    throw ValidationError("pricing.fog", "expected an object keyed by mno or an array");
  }
  for (const auto& [id, p] : sc.pricing.fog) (void)sc.mno_index(id);

  const auto& lambda = require(j, "lambda");
  if (lambda.is_number()) {
    sc.lambda.assign(static_cast<std::size_t>(std::max(sc.horizon, 0)), lambda.get<double>());
  } else {
    sc.lambda = detail::get_as<std::vector<double>>(lambda, "lambda");
  }

  const std::size_t nx = sc.services.size();
  const std::size_t nc = sc.locations.size() * nx;
  const auto& chain = require(j, "context_chain");
  const json& matrix = chain.is_object() ? require(chain, "matrix") : chain;
  const auto rows = detail::get_as<std::vector<std::vector<double>>>(matrix, "context_chain.matrix");
  if (rows.size() != nc) throw ValidationError("context_chain.matrix", "expected " + std::to_string(nc) + " rows");
  std::vector<std::size_t> perm(nc);
  for (std::size_t i = 0; i < nc; ++i) perm[i] = i;
  if (chain.is_object() && chain.contains("legend")) {
    const auto& legend = chain.at("legend");
    if (!legend.is_array() || legend.size() != nc)
      throw ValidationError("context_chain.legend", "expected one entry per (location, service)");
    std::vector<bool> seen(nc, false);
    for (std::size_t i = 0; i < nc; ++i) {
      const auto l = static_cast<std::size_t>(sc.location_index(require_as<std::string>(legend[i], "location")));
      const auto x = static_cast<std::size_t>(sc.service_index(require_as<std::string>(legend[i], "service")));
      perm[i] = l * nx + x;
      if (seen[perm[i]]) throw ValidationError("context_chain.legend", "duplicate (location, service) entry");
      seen[perm[i]] = true;
    }
  }
  sc.context_chain.assign(nc * nc, 0.0);
  for (std::size_t r = 0; r < nc; ++r) {
    if (rows[r].size() != nc)
      throw ValidationError("context_chain.matrix", "row " + std::to_string(r) + " has wrong length");
    for (std::size_t c = 0; c < nc; ++c) sc.context_chain[perm[r] * nc + perm[c]] = rows[r][c];
  }

  const auto& dists = require(j, "distributions");
  if (dists.is_array()) {
    read_distribution_entries(dists, sc.catalog, "distributions");
  } else if (dists.is_object()) {
    if (dists.contains("catalog")) {
      const auto path = base_dir / detail::get_as<std::string>(dists.at("catalog"), "distributions.catalog");
      for (const auto& [key, d] : catalog_from_json(load_json_file(path))) {
        const auto& [loc, mno, tier] = key;
        sc.catalog.insert(loc, mno, tier, d);
      }
    }
    if (dists.contains("inline")) read_distribution_entries(dists.at("inline"), sc.catalog, "distributions.inline");
  } else {
    throw ValidationError("distributions", "expected an array or {catalog, inline}");
  }

  const std::size_t nm = sc.mnos.size();
  sc.initial_state.assign(nc * nm, 0.0);
  const auto& init = require(j, "initial_state");
  if (init.is_string() && init.get<std::string>() == "uniform") {
    for (double& p : sc.initial_state) p = 1.0 / static_cast<double>(sc.initial_state.size());
  } else if (init.is_array()) {
    for (const auto& e : init) {
      const auto l = static_cast<std::size_t>(sc.location_index(require_as<std::string>(e, "location")));
      const auto x = static_cast<std::size_t>(sc.service_index(require_as<std::string>(e, "service")));
      const auto m = static_cast<std::size_t>(sc.mno_index(require_as<std::string>(e, "mno")));
      sc.initial_state[(l * nx + x) * nm + m] += require_as<double>(e, "prob");
    }
  } else {
    throw ValidationError("initial_state", "expected \"uniform\" or an array of {location, service, mno, prob}");
  }

  sc.validate();
  return sc;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(load_json_file(path), path.parent_path());
}

inline std::string scenario_hash(const Scenario& sc) { return hex64(fnv1a(scenario_to_json(sc).dump())); }

}  // namespace mnoswitch::experiments
