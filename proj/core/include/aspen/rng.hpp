// Fixed 64-bit splittable-mix generator so seeded runs reproduce exactly
// across platforms.
#pragma once

#include <cstdint>

namespace aspen {

struct SplitMix64 {
  uint64_t s = 0;

  explicit SplitMix64(uint64_t seed) : s(seed) {}

  uint64_t next() {
    s += 0x9E3779B97F4A7C15ull;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  uint64_t below(uint64_t n) { return next() % n; }
};

}  // namespace aspen
