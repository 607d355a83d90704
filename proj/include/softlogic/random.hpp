#pragma once

#include <cstdint>
#include <random>

namespace softlogic {

/// Seeded uniform draws on [0,1) with a platform-independent mapping from
/// the mt19937_64 stream (53 mantissa bits, no distribution adapter).
class UniformSampler {
 public:
  explicit UniformSampler(std::uint64_t seed) : rng_(seed) {}

  double next() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace softlogic
