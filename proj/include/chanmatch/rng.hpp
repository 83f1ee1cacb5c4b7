#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace chanmatch {

using Seed = std::uint64_t;

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a parent seed and a path of
/// indices. derive_seed(s, {a, b}) != derive_seed(s, {b, a}) in general.
constexpr Seed derive_seed(Seed seed, std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t h = mix64(seed ^ 0x6a09e667f3bcc908ULL);
  for (auto v : path) h = mix64(h ^ mix64(v + 0x3c6ef372fe94f82bULL));
  return h;
}

/// Counter-based uniform in [0,1) keyed on (seed, i, j). Used for per-pair
/// Bernoulli draws so results do not depend on iteration order.
inline double pair_uniform(Seed seed, std::uint64_t i, std::uint64_t j) noexcept {
  const std::uint64_t h = mix64(mix64(seed ^ mix64(i)) ^ (j * 0xd1b54a32d192ed03ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline bool pair_bernoulli(Seed seed, std::uint64_t i, std::uint64_t j, double prob) noexcept {
  return pair_uniform(seed, i, j) < prob;
}

/// Sequential engine for samplers that are inherently ordered
/// (shuffles, preferential attachment).
using Engine = std::mt19937_64;

inline Engine make_engine(Seed seed) { return Engine(mix64(seed)); }

/// Uniform integer in [0, bound). Lemire-free simple rejection so that the
/// stream is identical across standard library implementations.
inline std::uint64_t uniform_below(Engine& eng, std::uint64_t bound) {
  const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
  std::uint64_t x;
  do {
    x = eng();
  } while (x >= limit);
  return x % bound;
}

inline double uniform01(Engine& eng) { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

}  // namespace chanmatch
