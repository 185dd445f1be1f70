#pragma once

#include <complex>
#include <random>

#include "bwp/moebius.hpp"

namespace testing {

using bwp::cplx;

inline cplx uniform_box(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  const double x = u(rng);
  const double y = u(rng);
  return {x, y};
}

// log-uniform modulus in [rmin, rmax], uniform argument.
inline cplx polar_draw(std::mt19937_64& rng, double rmin, double rmax) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = rmin * std::pow(rmax / rmin, u(rng));
  const double t = 2 * 3.141592653589793 * u(rng);
  return std::polar(r, t);
}

// Random unit-determinant map with entries in the box [-2, 2]^2.
inline bwp::MoebiusMap random_map(std::mt19937_64& rng) {
  for (;;) {
    cplx a = uniform_box(rng, -2, 2), b = uniform_box(rng, -2, 2);
    cplx c = uniform_box(rng, -2, 2), d = uniform_box(rng, -2, 2);
    if (std::abs(a * d - b * c) > 0.1) return bwp::MoebiusMap(a, b, c, d);
  }
}

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
