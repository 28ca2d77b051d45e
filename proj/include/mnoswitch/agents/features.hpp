#pragma once

#include <cstddef>
#include <vector>

#include "mnoswitch/env.hpp"

namespace mnoswitch::agents {

// one-hot(location) ++ one-hot(service) ++ one-hot(mno held), optionally
// followed by the normalized remaining time (T - t) / T.
class FeatureEncoder {
 public:
  FeatureEncoder(const Environment& env, bool include_time)
      : nl_(env.num_locations()),
        nx_(env.num_services()),
        nm_(env.num_mnos()),
        horizon_(env.horizon()),
        include_time_(include_time) {}

  int dim() const noexcept { return nl_ + nx_ + nm_ + (include_time_ ? 1 : 0); }
  bool include_time() const noexcept { return include_time_; }

  std::vector<double> encode(const State& s) const {
    std::vector<double> f(static_cast<std::size_t>(dim()), 0.0);
    f[static_cast<std::size_t>(s.location)] = 1.0;
    f[static_cast<std::size_t>(nl_ + s.service)] = 1.0;
    f[static_cast<std::size_t>(nl_ + nx_ + s.mno)] = 1.0;
    if (include_time_ && horizon_ > 0)
      f.back() = static_cast<double>(horizon_ - s.t) / static_cast<double>(horizon_);
    return f;
  }

 private:
  int nl_;
  int nx_;
  int nm_;
  int horizon_;
  bool include_time_;
};

}  // namespace mnoswitch::agents
