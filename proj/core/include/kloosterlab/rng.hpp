#pragma once

#include <cstdint>

namespace kloosterlab {

// splitmix64: 64-bit splittable generator, identical stream on every platform.
// Used for all sampled sweeps so reports are reproducible from the recorded seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n); n > 0. Modulo bias is irrelevant at desk scale.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

}  // namespace kloosterlab
