#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace doekit {

namespace detail {

/// SplitMix64 step; used for seed mixing only.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace detail

/// Deterministic pseudo-random generator.
///
/// The stream is a Mersenne Twister (std::mt19937_64) seeded with a 64-bit
/// value; uniform doubles are produced by the 53-bit mantissa mapping
/// (x >> 11) * 2^-53 and bounded integers by rejection sampling, so the
/// stream is identical across platforms and standard libraries.
///
/// `split(key)` derives an independent child stream from the *original*
/// seed and the key only. Splitting never consumes parent state, so
/// per-replicate streams are order-independent and safe to create from
/// multiple threads.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(detail::splitmix64(seed)) {}

  std::uint64_t seed() const { return seed_; }

  /// Uniform double in [0, 1).
  double next_unit() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n). Requires n >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    // Rejection below the largest multiple of n, for exact uniformity.
    const std::uint64_t threshold = (0ULL - n) % n;
    for (;;) {
      const std::uint64_t x = engine_();
      if (x >= threshold) return x % n;
    }
  }

  /// Child stream keyed by a 64-bit value; depends only on (seed, key).
  Rng split(std::uint64_t key) const {
    return Rng(detail::splitmix64(seed_ ^ detail::splitmix64(key + 0x632be59bd9b4e019ULL)));
  }

  /// Child stream keyed by a label, e.g. split("wlhs").
  Rng split(std::string_view key) const { return split(detail::fnv1a64(key)); }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace doekit
