#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>

#include "mnoswitch/error.hpp"
#include "mnoswitch/random.hpp"

namespace mnoswitch::agents {

enum class Decay { linear, exponential };

inline Decay parse_decay(const std::string& s) {
  if (s == "linear") return Decay::linear;
  if (s == "exponential") return Decay::exponential;
  throw ValidationError("epsilon.decay", "expected linear or exponential, got '" + s + "'");
}

inline const char* to_string(Decay d) { return d == Decay::linear ? "linear" : "exponential"; }

// Exploration rate per episode: starts at `start`, reaches `end` exactly after
// `horizon` episodes and stays there.
struct EpsilonSchedule {
  double start = 0.8;
  double end = 0.05;
  Decay decay = Decay::linear;
  std::size_t horizon = 1200;

  void validate() const {
    if (!(start >= 0.0 && start <= 1.0)) throw ValidationError("epsilon.start", "must be in [0, 1]");
    if (!(end >= 0.0 && end <= start)) throw ValidationError("epsilon.end", "must be in [0, start]");
  }

  // `episode` is zero-based.
  double value(std::size_t episode) const {
    if (episode >= horizon) return end;
    const double frac = static_cast<double>(episode) / static_cast<double>(horizon);
    double eps = start;
    if (decay == Decay::linear) {
      eps = start - (start - end) * frac;
    } else if (end > 0.0) {
      eps = start * std::pow(end / start, frac);
    } else {
      eps = start * std::pow(1e-3, frac);
    }
    return std::clamp(eps, end, start);
  }
};

// Index of the smallest entry; ties resolve to the smallest index.
inline int argmin(std::span<const double> values) {
  if (values.empty()) throw ValidationError("q_values", "empty action set");
  int best = 0;
  for (std::size_t i = 1; i < values.size(); ++i)
    if (values[i] < values[static_cast<std::size_t>(best)]) best = static_cast<int>(i);
  return best;
}

// Epsilon-greedy over cost estimates: uniform action with probability epsilon,
// otherwise the cost-minimizing one.
inline int select_action(std::span<const double> q_values, double epsilon, Rng& rng) {
  if (q_values.empty()) throw ValidationError("q_values", "empty action set");
  if (epsilon > 0.0 && uniform01(rng) < epsilon)
    return static_cast<int>(uniform_index(rng, q_values.size()));
  return argmin(q_values);
}

}  // namespace mnoswitch::agents
