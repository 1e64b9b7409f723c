#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace psylex {

// All randomness in the library flows from one explicit 64-bit seed.
// Sub-stages derive their own seeds with derive_seed() so that a stage can
// be replayed in isolation (cross-validation fold f trains with
// derive_seed(seed, f); this is part of the reproducibility contract).

/// splitmix64 finalizer; statistically independent streams per salt.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Uniform index in [0, n). Modulo is fine at the scales used here and
/// keeps results identical across standard library implementations.
inline std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(rng() % n);
}

/// Uniform double in [0, 1), 53 bits, portable across implementations.
inline double uniform_real01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// In-place Fisher-Yates shuffle using uniform_index (portable, unlike
/// std::shuffle whose output is implementation-defined).
template <typename T>
void deterministic_shuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = uniform_index(rng, i);
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace psylex
