#pragma once

#include <cmath>
#include <cstdint>

namespace shamap {

// SplitMix64. Used instead of <random> distributions so that generated
// fixtures are bit-identical across standard library implementations.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1).
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double next_uniform(double lo, double hi) {
    return lo + (hi - lo) * next_double();
  }

  // Standard normal via Box-Muller.
  double next_normal() {
    double u1 = next_double();
    while (u1 == 0.0) u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

private:
  std::uint64_t state_;
};

}  // namespace shamap
