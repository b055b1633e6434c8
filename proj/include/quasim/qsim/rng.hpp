#pragma once

#include <cstdint>
#include <random>

namespace quasim {

/// Portable seeded generator.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are not portable, so every
/// conversion to a number in a range is done here:
///   - uniform01():  top 53 bits of one engine draw, times 2^-53, in [0, 1)
///   - uniform(a,b): a + (b - a) * uniform01()
///   - index(n):     rejection sampling on raw draws, unbiased, in [0, n)
/// Histograms, shuffles and parameter initialisations built on this class are
/// bit-identical on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::uint64_t index(std::uint64_t n) {
    // Largest multiple of n that fits; draws above it are rejected.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace quasim
