#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace cml {

// Counter-based randomness: every draw is a pure function of a 64-bit key
// derived from (seed, structured indices). Parallel and serial runs consume
// exactly the same values, so results are independent of scheduling.

/// SplitMix64 finalizer. Full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

constexpr std::uint64_t hash_combine(std::uint64_t h, std::uint64_t x) {
  return mix64(h ^ (x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

/// Hash of a seed plus any number of structured indices.
template <class... Ts>
constexpr std::uint64_t hash_all(std::uint64_t seed, Ts... xs) {
  std::uint64_t h = mix64(seed);
  ((h = hash_combine(h, static_cast<std::uint64_t>(xs))), ...);
  return h;
}

/// Uniform double in [0, 1) from 64 random bits (53-bit mantissa).
constexpr double u01(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1] (never zero; safe under log).
constexpr double u01_open(std::uint64_t bits) {
  return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Standard normal deviate keyed by a single hash value (Box-Muller).
inline double gaussian_from(std::uint64_t h) {
  const double u1 = u01_open(mix64(h));
  const double u2 = u01(mix64(h ^ 0xd1b54a32d192ed03ull));
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

/// Sequential stream over the counter-based generator. Cheap to copy;
/// derive() forks an independent child stream.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t key) : key_(key) {}

  template <class... Ts>
  static RandomStream from(std::uint64_t seed, Ts... path) {
    return RandomStream(hash_all(seed, path...));
  }

  RandomStream derive(std::uint64_t index) const {
    return RandomStream(hash_combine(key_, index));
  }

  std::uint64_t next_u64() { return hash_combine(key_, ++count_); }
  double next_u01() { return u01(next_u64()); }
  double next_gaussian() {
    const double u1 = u01_open(next_u64());
    const double u2 = u01(next_u64());
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Number of raw 64-bit values consumed so far.
  std::uint64_t draws() const { return count_; }

 private:
  std::uint64_t key_ = 0;
  std::uint64_t count_ = 0;
};

}  // namespace cml
