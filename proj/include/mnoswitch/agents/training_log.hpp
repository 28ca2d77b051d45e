#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace mnoswitch::agents {

struct EpisodeLog {
  std::size_t episode = 0;  // 1-based
  double epsilon = 0.0;
  double greedy_cost = 0.0;  // exact expected cost of the greedy policy after this episode
  double loss = 0.0;
};

// First episode whose greedy cost is within `rel_tol` of `optimum`;
// log.size() + 1 if the threshold is never reached.
inline std::size_t episodes_to_threshold(const std::vector<EpisodeLog>& log, double optimum,
                                         double rel_tol) {
  const double limit = optimum * (1.0 + rel_tol);
  for (const auto& e : log)
    if (e.greedy_cost <= limit) return e.episode;
  return log.size() + 1;
}

}  // namespace mnoswitch::agents
