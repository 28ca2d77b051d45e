#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "mnoswitch/agents/training_log.hpp"
#include "mnoswitch/env.hpp"
#include "mnoswitch/error.hpp"
#include "mnoswitch/experiments/csv.hpp"
#include "mnoswitch/experiments/traces.hpp"
#include "mnoswitch/policy.hpp"

namespace mnoswitch::experiments {

inline constexpr std::string_view kPolicyHeader = "t,location,service,mno_in,action";

inline std::string policy_csv(const Environment& env, const Policy& policy) {
  const auto& sc = env.scenario();
  std::ostringstream os;
  os << kPolicyHeader << '\n';
  for (int t = 1; t <= env.horizon(); ++t) {
    for (int i = 0; i < env.num_states(); ++i) {
      const State s = env.state_from_index(i, t);
      os << t << ',' << sc.locations[static_cast<std::size_t>(s.location)] << ','
         << sc.services[static_cast<std::size_t>(s.service)].id << ',' << sc.mnos[static_cast<std::size_t>(s.mno)]
         << ',' << sc.mnos[static_cast<std::size_t>(policy.at(t, i))] << '\n';
    }
  }
  return os.str();
}

// Reads a policy CSV; every (t, location, service, mno_in) must appear exactly once.
inline Policy read_policy_csv(std::istream& in, const Environment& env) {
  const auto& sc = env.scenario();
  Policy p(env.horizon(), env.num_states());
  std::vector<bool> seen(static_cast<std::size_t>(env.horizon()) * static_cast<std::size_t>(env.num_states()), false);
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++lineno;
    const auto view = detail::trim(line);
    if (view.empty()) continue;
    if (!header) {
      if (view != kPolicyHeader) throw ParseError(lineno, "expected header '" + std::string(kPolicyHeader) + "'");
      header = true;
      continue;
    }
    const auto cols = detail::split_csv(view);
    if (cols.size() != 5) throw ParseError(lineno, "expected 5 columns");
    int t = 0;
    const auto [ptr, ec] = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), t);
    if (ec != std::errc() || ptr != cols[0].data() + cols[0].size() || t < 1 || t > env.horizon())
      throw ParseError(lineno, "t out of range");
    try {
      const State s{sc.location_index(std::string(cols[1])), sc.service_index(std::string(cols[2])),
                    sc.mno_index(std::string(cols[3])), t};
      const int idx = env.state_index(s);
      const auto off = static_cast<std::size_t>(t - 1) * static_cast<std::size_t>(env.num_states()) +
                       static_cast<std::size_t>(idx);
      if (seen[off]) throw ParseError(lineno, "duplicate policy row");
      seen[off] = true;
      p.set(t, idx, sc.mno_index(std::string(cols[4])));
    } catch (const ValidationError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  if (!header) throw ParseError(lineno, "missing header");
  for (bool b : seen)
    if (!b) throw ValidationError("policy", "policy does not cover every (t, location, service, mno_in)");
  return p;
}

inline Policy load_policy(const std::filesystem::path& path, const Environment& env) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open policy file '" + path.string() + "'");
  return read_policy_csv(in, env);
}

inline std::string training_log_csv(const std::vector<agents::EpisodeLog>& log) {
  std::ostringstream os;
  os << "episode,epsilon,greedy_cost,loss\n";
  for (const auto& e : log)
    os << e.episode << ',' << format_double(e.epsilon) << ',' << format_double(e.greedy_cost) << ','
       << format_double(e.loss) << '\n';
  return os.str();
}

}  // namespace mnoswitch::experiments
