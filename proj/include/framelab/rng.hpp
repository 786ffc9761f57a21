#pragma once

#include <cmath>
#include <cstdint>

#include "scalar.hpp"

namespace framelab {

// Counter-based generator with a fixed, portable output sequence.  Every
// randomized routine in the library derives its draws from (seed, index)
// pairs, so results are reproducible across platforms and independent of
// evaluation order.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of precision.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; pairs are cached so consecutive calls
  // consume one uniform pair per two variates.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform01();  // in (0, 1], keeps log finite
    double u2 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 6.283185307179586476925287 * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Decorrelated child seed for stream `index` of a master seed.
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
  g.next();
  return g.next();
}

inline SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64(child_seed(seed, index));
}

// Standard Gaussian scalar over the requested field; complex draws have
// independent N(0,1) real and imaginary parts.
template <class T>
T gaussian(SplitMix64& g) {
  if constexpr (is_complex_v<T>) {
    double re = g.normal();
    double im = g.normal();
    return cplx(re, im);
  } else {
    return g.normal();
  }
}

// Uniform scalar on the centered box of half-width `radius` (per real
// coordinate; a complex draw fills real and imaginary parts independently).
template <class T>
T box_uniform(SplitMix64& g, double radius) {
  if constexpr (is_complex_v<T>) {
    double re = g.uniform(-radius, radius);
    double im = g.uniform(-radius, radius);
    return cplx(re, im);
  } else {
    return g.uniform(-radius, radius);
  }
}

}  // namespace framelab
