#pragma once

// Counter-based random streams. A draw is a pure function of
// (key, step, substream, draw index), so replica workers need no shared state
// and results are independent of scheduling order. Uniform bits come from a
// double application of the 64-bit avalanche mixer used by SplitMix64.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace mshom {

inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xff51afd7ed558ccdULL;
  z ^= z >> 33;
  z *= 0xc4ceb9fe1a85ec53ULL;
  z ^= z >> 33;
  return z;
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
  return mix64(a ^ (0x9e3779b97f4a7c15ULL + b + (a << 6) + (a >> 2)));
}

// Stream identities used when deriving keys, so that draws made for different
// purposes can never collide even with equal indices.
enum class StreamPurpose : std::uint64_t {
  ou_noise = 1,
  invariant_draw = 2,
  semigroup = 3,
  khasminskii = 4,
  test = 99,
};

struct GaussianStream {
  std::uint64_t key = 0;

  static GaussianStream derive(std::uint64_t seed, StreamPurpose purpose,
                               std::uint64_t a = 0, std::uint64_t b = 0) {
    std::uint64_t k = hash_combine(seed, static_cast<std::uint64_t>(purpose));
    k = hash_combine(k, a);
    k = hash_combine(k, b);
    return GaussianStream{k};
  }

  // uniform in (0,1]; never returns 0 so log() below is safe
  double uniform(std::uint64_t step, std::uint64_t sub, std::uint64_t draw) const {
    std::uint64_t c = hash_combine(hash_combine(key, step), (sub << 32) ^ draw);
    return (static_cast<double>(c >> 11) + 1.0) * 0x1.0p-53;
  }

  // standard normal via Box-Muller (cosine branch)
  double normal(std::uint64_t step, std::uint64_t sub) const {
    const double u1 = uniform(step, sub, 0);
    const double u2 = uniform(step, sub, 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
};

}  // namespace mshom
