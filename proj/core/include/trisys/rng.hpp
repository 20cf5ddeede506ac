#pragma once

#include <cstdint>

namespace trisys {

// splitmix64: tiny, stable across platforms. All randomness in the project
// flows through this, keyed by an explicit seed.
struct Rng {
  uint64_t state;

  explicit Rng(uint64_t seed) : state(seed) {}

  uint64_t next() {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, n), rejection-sampled so the distribution is exact.
  uint64_t uniform(uint64_t n) {
    uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return x % n;
  }

  int32_t fp(int64_t p) { return static_cast<int32_t>(uniform(static_cast<uint64_t>(p))); }
  int32_t fp_nonzero(int64_t p) {
    return static_cast<int32_t>(1 + uniform(static_cast<uint64_t>(p - 1)));
  }
};

}  // namespace trisys
