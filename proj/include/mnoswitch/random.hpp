#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace mnoswitch {

// All stochastic code takes one of these by reference; there is no global RNG.
using Rng = std::mt19937_64;

// Uniform double in [0, 1) built from the top 53 bits, identical on every
// standard library (unlike std::uniform_real_distribution).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n). Rejection sampling keeps it unbiased and portable.
inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  const std::uint64_t bound = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r = rng();
  while (r >= limit) r = rng();
  return static_cast<std::size_t>(r % bound);
}

// Derives an independent stream seed from a base seed and a stream id
// (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Knuth's multiplication method for small means, normal-free and portable.
// Large means are split into chunks so exp(-mean) never underflows.
inline std::uint64_t poisson(Rng& rng, double mean) {
  std::uint64_t total = 0;
  while (mean > 0.0) {
    const double chunk = mean > 30.0 ? 30.0 : mean;
    mean -= chunk;
    const double limit = std::exp(-chunk);
    double p = uniform01(rng);
    std::uint64_t k = 0;
    while (p > limit) {
      ++k;
      p *= uniform01(rng);
    }
    total += k;
  }
  return total;
}

}  // namespace mnoswitch
