#pragma once

#include <cstdint>
#include <random>

namespace hyperlab {

/// Seeded generator with pinned output derivation (no library-defined
/// distributions), so identical seeds give identical streams everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform in [0,1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // modulo bias is irrelevant at the sizes used here
    return gen_() % n;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace hyperlab
