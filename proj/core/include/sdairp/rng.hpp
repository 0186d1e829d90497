#pragma once

#include <cmath>
#include <cstdint>

namespace sdairp {

// Counter-based pseudo-random streams built on the SplitMix64 output function
// (Steele, Lea & Flood 2014). A stream is identified by a 64-bit key derived
// from (seed, stream-id pair); the k-th variate of a stream is obtained by
// finalizing key + k*GAMMA, which gives O(1) random access and makes results
// independent of evaluation order and thread schedule.
class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Key for stream (a, b) under `seed`. Successive mixing keeps distinct
  // (seed, a, b) triples on distinct sequences.
  static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t k = mix(seed + kGamma);
    k = mix(k ^ (a + kGamma));
    k = mix(k ^ (b + kGamma));
    return k;
  }

  static std::uint64_t raw(std::uint64_t key, std::uint64_t counter) {
    return mix(key + counter * kGamma);
  }

  // Uniform draw on (0,1), 53-bit resolution, never exactly 0 or 1.
  static double uniform01(std::uint64_t key, std::uint64_t counter) {
    return (static_cast<double>(raw(key, counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal draw via the inverse CDF (Wichura's AS241, double
  // precision variant). One counter per variate.
  static double normal(std::uint64_t key, std::uint64_t counter) {
    return inverse_normal_cdf(uniform01(key, counter));
  }

  static double inverse_normal_cdf(double p);
};

}  // namespace sdairp
