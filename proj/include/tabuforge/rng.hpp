#pragma once

#include <cstdint>
#include <random>

namespace tabuforge {

// Seeded random source with implementation-independent bounded draws.
// <random> distributions are free to differ between standard libraries, so
// bounded integers use modulo rejection on the raw mt19937_64 stream; this
// keeps search trajectories byte-reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n). n == 0 is a caller bug; returns 0.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    // Largest multiple of n that fits; draws at or above it would bias low
    // residues and are rejected.
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % n);
    std::uint64_t r = engine_();
    while (r >= limit) r = engine_();
    return r % n;
  }

  // Uniform double in [0, 1) with 53 random bits.
  double unit() { return (engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tabuforge
