#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "mnoswitch/error.hpp"

namespace mnoswitch {

// Per-workload prices: fog price per MNO and a single cloud price.
// Fog must be strictly more expensive than cloud for every MNO.
struct Pricing {
  std::map<std::string, double> fog;
  double cloud = 1.0;

  double fog_price(const std::string& mno) const {
    const auto it = fog.find(mno);
    if (it == fog.end()) throw ValidationError("pricing.fog." + mno, "missing fog price");
    return it->second;
  }

  double max_fog_price() const {
    double m = 0.0;
    for (const auto& [id, p] : fog) m = std::max(m, p);
    return m;
  }

  void validate() const {
    if (!(cloud > 0.0) || !std::isfinite(cloud)) throw ValidationError("pricing.cloud", "must be > 0");
    for (const auto& [id, p] : fog) {
      if (!std::isfinite(p) || !(p > cloud))
        throw ValidationError("pricing.fog." + id, "fog price must exceed the cloud price");
    }
  }

  bool operator==(const Pricing&) const = default;
};

struct Split {
  double alpha = 0.0;  // fraction of workload sent to the fog node
  bool feasible = false;
};

// Smallest fog fraction alpha in [0, 1] with
//   f_cloud * (1 - alpha) + f_fog * alpha >= gamma.
// Returns feasible = false when even alpha = 1 misses the floor.
inline Split alpha_star(double f_cloud, double f_fog, double gamma) {
  if (f_cloud >= gamma) return {0.0, true};
  if (f_fog < gamma) return {1.0, false};
  // Here f_cloud < gamma <= f_fog, so the denominator is positive.
  const double alpha = (gamma - f_cloud) / (f_fog - f_cloud);
  return {std::clamp(alpha, 0.0, 1.0), true};
}

// mu_m * alpha * w + nu * (1 - alpha) * w
inline double slot_cost(const Pricing& pricing, const std::string& mno, double alpha,
                        double workload) {
  if (workload < 0.0) throw ValidationError("workload", "must be >= 0");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ValidationError("alpha", "must be in [0, 1]");
  return pricing.fog_price(mno) * alpha * workload + pricing.cloud * (1.0 - alpha) * workload;
}

}  // namespace mnoswitch
