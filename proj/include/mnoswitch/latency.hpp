#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mnoswitch/error.hpp"
#include "mnoswitch/random.hpp"

namespace mnoswitch {

inline constexpr double kProbabilityTolerance = 1e-9;
inline constexpr double kDefaultBinWidthMs = 5.0;

// Discrete RTT distribution. Each bin is represented by one latency value
// (for histograms built by from_samples this is the bin's upper edge, so
// CDF queries are exact at bin boundaries).
class LatencyDistribution {
 public:
  LatencyDistribution() = default;

  LatencyDistribution(std::vector<double> latencies_ms, std::vector<double> probs)
      : latencies_(std::move(latencies_ms)), probs_(std::move(probs)) {
    if (latencies_.empty()) throw ValidationError("bins", "distribution has no bins");
    if (latencies_.size() != probs_.size())
      throw ValidationError("probs", "length differs from bins");
    double sum = 0.0;
    for (std::size_t i = 0; i < latencies_.size(); ++i) {
      if (!std::isfinite(latencies_[i]) || latencies_[i] < 0.0)
        throw ValidationError("bins", "latency values must be finite and >= 0");
      if (i > 0 && !(latencies_[i] > latencies_[i - 1]))
        throw ValidationError("bins", "latency values must be strictly increasing");
      if (!std::isfinite(probs_[i]) || probs_[i] < 0.0)
        throw ValidationError("probs", "probabilities must be finite and >= 0");
      sum += probs_[i];
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance)
      throw ValidationError("probs", "probabilities sum to " + std::to_string(sum));
    cdf_.resize(probs_.size());
    std::partial_sum(probs_.begin(), probs_.end(), cdf_.begin());
    cdf_.back() = 1.0;
  }

  // Point mass at a single latency.
  static LatencyDistribution point(double latency_ms) {
    return LatencyDistribution({latency_ms}, {1.0});
  }

  std::span<const double> latencies() const noexcept { return latencies_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return latencies_.size(); }
  double max_latency() const { return latencies_.back(); }

  double mean() const {
    return std::inner_product(latencies_.begin(), latencies_.end(), probs_.begin(), 0.0);
  }

  bool operator==(const LatencyDistribution& o) const {
    return latencies_ == o.latencies_ && probs_ == o.probs_;
  }

 private:
  friend double confidence(const LatencyDistribution&, double);
  friend double sample(const LatencyDistribution&, Rng&);

  std::vector<double> latencies_;
  std::vector<double> probs_;
  std::vector<double> cdf_;
};

// Service type with latency bound and confidence floor.
struct ServiceSpec {
  std::string id;
  double tau_ms = 0.0;
  double gamma = 0.0;

  void validate() const {
    if (!(tau_ms > 0.0) || !std::isfinite(tau_ms))
      throw ValidationError("services." + id + ".tau_ms", "must be > 0");
    if (!(gamma > 0.0 && gamma <= 1.0))
      throw ValidationError("services." + id + ".gamma", "must be in (0, 1]");
  }

  bool operator==(const ServiceSpec&) const = default;
};

// Probability that latency is at most tau_ms: the mass of every bin whose
// representative value is <= tau_ms.
inline double confidence(const LatencyDistribution& dist, double tau_ms) {
  const auto& lat = dist.latencies_;
  const auto it = std::upper_bound(lat.begin(), lat.end(), tau_ms);
  if (it == lat.begin()) return 0.0;
  return dist.cdf_[static_cast<std::size_t>(it - lat.begin()) - 1];
}

// Histogram of RTT samples. Bin k covers ((k-1)w, kw] and is represented by kw;
// a sample lying exactly on an edge falls into the lower bin.
inline LatencyDistribution from_samples(std::span<const double> samples_ms,
                                        double bin_width_ms = kDefaultBinWidthMs) {
  if (samples_ms.empty()) throw InsufficientData("no latency samples");
  if (!(bin_width_ms > 0.0) || !std::isfinite(bin_width_ms))
    throw ValidationError("bin_width", "must be > 0");
  std::map<long long, std::size_t> counts;
  for (double s : samples_ms) {
    if (!std::isfinite(s) || s < 0.0) throw ValidationError("rtt_ms", "sample must be finite and >= 0");
    const auto k = static_cast<long long>(std::ceil(s / bin_width_ms));
    ++counts[k];
  }
  std::vector<double> lat;
  std::vector<double> probs;
  lat.reserve(counts.size());
  probs.reserve(counts.size());
  const auto n = static_cast<double>(samples_ms.size());
  for (const auto& [k, c] : counts) {
    lat.push_back(static_cast<double>(k) * bin_width_ms);
    probs.push_back(static_cast<double>(c) / n);
  }
  return LatencyDistribution(std::move(lat), std::move(probs));
}

// Inverse-CDF draw of one bin value.
inline double sample(const LatencyDistribution& dist, Rng& rng) {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(dist.cdf_.begin(), dist.cdf_.end(), u);
  const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - dist.cdf_.begin()),
                                         dist.size() - 1);
  return dist.latencies_[idx];
}

enum class Tier { cloud, fog };

inline const char* to_string(Tier t) { return t == Tier::cloud ? "cloud" : "fog"; }

inline Tier parse_tier(const std::string& s) {
  if (s == "cloud") return Tier::cloud;
  if (s == "fog") return Tier::fog;
  throw ValidationError("tier", "expected cloud or fog, got '" + s + "'");
}

// Distributions keyed by (location id, mno id, tier).
class LatencyCatalog {
 public:
  using Key = std::tuple<std::string, std::string, Tier>;

  void insert(const std::string& location, const std::string& mno, Tier tier,
              LatencyDistribution dist) {
    entries_.insert_or_assign(Key{location, mno, tier}, std::move(dist));
  }

  bool contains(const std::string& location, const std::string& mno, Tier tier) const {
    return entries_.count(Key{location, mno, tier}) != 0;
  }

  const LatencyDistribution& at(const std::string& location, const std::string& mno,
                                Tier tier) const {
    const auto it = entries_.find(Key{location, mno, tier});
    if (it == entries_.end())
      throw ValidationError("distributions", "no " + std::string(to_string(tier)) +
                                                 " distribution for location '" + location +
                                                 "', mno '" + mno + "'");
    return it->second;
  }

  // Every (location, mno) pair must carry both tiers.
  void require_complete() const {
    for (const auto& [key, dist] : entries_) {
      const auto& [loc, mno, tier] = key;
      const Tier other = tier == Tier::cloud ? Tier::fog : Tier::cloud;
      if (!contains(loc, mno, other))
        throw ValidationError("distributions", "pair (location '" + loc + "', mno '" + mno +
                                                   "') is missing its " + to_string(other) +
                                                   " distribution");
    }
  }

  std::size_t size() const noexcept { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

 private:
  std::map<Key, LatencyDistribution> entries_;
};

}  // namespace mnoswitch
