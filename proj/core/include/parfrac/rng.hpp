#pragma once

#include <cstdint>

namespace parfrac {

/// SplitMix64: z += 0x9e3779b97f4a7c15; mix by xor-shift-multiply twice.
/// Deterministic across platforms; every benchmark derives its randomness
/// from this generator and a user seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return double(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Standard normal variates by the Box-Muller transform over SplitMix64
/// uniforms; generates pairs, returns them alternately.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : rng_(seed) {}
  double next();

 private:
  SplitMix64 rng_;
  bool have_spare_ = false;
  double spare_ = 0;
};

}  // namespace parfrac
