#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

namespace pocsel {

// mt19937_64's output sequence is fixed by the standard; the distributions in
// <random> are not, so all draws go through the helpers below.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Seed of substream `index` under master `seed`.
constexpr std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

inline Rng make_substream(std::uint64_t seed, std::uint64_t index) {
  return Rng(substream_seed(seed, index));
}

/// Uniform double in [0,1).
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Unbiased integer in [0, n).
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = Rng::max() - Rng::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Fills `out` with a Dirichlet(1,...,1) draw.
inline void dirichlet_flat(Rng& rng, std::span<double> out) {
  double total = 0.0;
  for (double& v : out) {
    v = -std::log1p(-uniform01(rng));
    total += v;
  }
  for (double& v : out) v /= total;
}

}  // namespace pocsel
