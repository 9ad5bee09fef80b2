#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace cwknn {

/// SplitMix64. This generator and the sampling helpers below are part of the
/// reproducibility contract (see docs/rng.md); changing them changes every
/// seeded subset and simulated dataset.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Top 53 bits scaled into [0, 1).
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// a + (b - a) * uniform01(); returns a when a == b.
  double uniform(double a, double b) noexcept { return a + (b - a) * uniform01(); }

  /// Unbiased integer in [0, n) by rejection of the low (2^64 mod n) values. n > 0.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold) return x % n;
    }
  }

 private:
  std::uint64_t state_;
};

/// First `m` entries of a partial Fisher-Yates shuffle of 0..n-1:
/// for i in [0, m): swap(a[i], a[i + below(n - i)]).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t m, SplitMix64& rng);

}  // namespace cwknn
