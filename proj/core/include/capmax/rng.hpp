// Deterministic RNG for seeded checks and probe sampling.
// splitmix64 keeps the byte-identical-output contract independent of the
// standard library's distribution implementations.

#pragma once

#include <cstdint>
#include <cmath>

namespace capmax {

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 significant bits.
  double next_double() { return std::ldexp(static_cast<double>(next_u64() >> 11), -53); }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

  // Derive an independent stream, e.g. one per work item.
  SplitMix64 fork(std::uint64_t tag) { return SplitMix64(next_u64() ^ (tag * 0x9e3779b97f4a7c15ULL)); }

 private:
  std::uint64_t state_;
};

}  // namespace capmax
