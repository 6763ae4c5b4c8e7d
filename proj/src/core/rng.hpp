#pragma once

#include "core/params.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace grushin {

// Seeded sampling helper. Draws are derived from raw mt19937_64 output with
// explicit arithmetic (no distribution objects), so a fixed seed reproduces
// the same sequence on every run of a given build.
struct SampleRng {
  std::mt19937_64 g;
  explicit SampleRng(std::uint64_t seed) : g(seed) {}

  double uniform() { return static_cast<double>(g() >> 11) * 0x1.0p-53; }  // [0,1)

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double gaussian() {
    double u1 = uniform();
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  Vec direction(int n) {
    Vec d(n);
    for (;;) {
      for (int i = 0; i < n; ++i) d(i) = gaussian();
      const double norm = d.norm();
      if (norm > 1e-12) return d / norm;
    }
  }

  // uniform radius in [rmin, rmax] along a uniform direction
  Vec annulus_point(int n, double rmin, double rmax) {
    return uniform(rmin, rmax) * direction(n);
  }
};

}  // namespace grushin
