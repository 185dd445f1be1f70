#include <doctest.h>

#include <cmath>
#include <random>

#include "bwp/errors.hpp"
#include "bwp/moebius.hpp"
#include "support.hpp"

using namespace bwp;
using testing::random_map;
using testing::rel;
using testing::uniform_box;

namespace {
const ComplexPoint kInf = ComplexPoint::infinity();
const MoebiusMap kTimes4(2.0, 0.0, 0.0, 0.5);
const MoebiusMap kMinusInv(0.0, 1.0, -1.0, 0.0);
}  // namespace

TEST_CASE("apply handles identity, fixed points and infinity") {
  CHECK(MoebiusMap().apply(cplx(1, 2)) == ComplexPoint(cplx(1, 2)));
  CHECK(chordal(kMinusInv.apply(cplx(0, 1)), cplx(0, 1)) < 1e-15);
  CHECK(kTimes4.apply(kInf).is_infinite());
  CHECK(kMinusInv.apply(0.0).is_infinite());
  CHECK(kMinusInv.apply(kInf) == ComplexPoint(0.0));
}

TEST_CASE("composition and inversion") {
  std::mt19937_64 rng(7);
  auto m = random_map(rng);
  CHECK((m * m.inverse()).is_identity(1e-12));
  CHECK(projective_distance(kTimes4 * kTimes4, MoebiusMap(4.0, 0.0, 0.0, 0.25)) < 1e-15);
  for (int i = 0; i < 100; ++i) {
    auto p = random_map(rng) * random_map(rng);
    CHECK(std::abs(p.det() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(MoebiusMap(1.0, 2.0, 2.0, 4.0), InvalidParameter);
}

TEST_CASE("derivatives") {
  CHECK(MoebiusMap().derivative(cplx(3, -1)) == cplx(1, 0));
  CHECK(std::abs(kTimes4.derivative(1.0) - cplx(4, 0)) < 1e-15);
  CHECK(std::abs(std::abs(kMinusInv.derivative(2.0)) - 0.25) < 1e-15);
  CHECK_THROWS_AS(kMinusInv.derivative(0.0), SingularArgument);
  CHECK_THROWS_AS(kTimes4.derivative(kInf), SingularArgument);

  CHECK(MoebiusMap().spherical_derivative(cplx(5, 5)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kMinusInv.spherical_derivative(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kMinusInv.spherical_derivative(kInf) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(kTimes4.spherical_derivative(0.0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(kTimes4.spherical_derivative(kInf) == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("fixed points and multiplier") {
  auto f = fixed_points_multiplier(kTimes4);
  CHECK(f.attracting.is_infinite());
  CHECK(f.repelling == ComplexPoint(0.0));
  CHECK(std::abs(f.multiplier - cplx(4, 0)) < 1e-12);

  const MoebiusMap shift(1.0, 1.0, 0.0, 1.0);
  auto g = fixed_points_multiplier(conjugate(kTimes4, shift));
  CHECK(chordal(g.repelling, 1.0) < 1e-12);
  CHECK(g.attracting.is_infinite());
  CHECK(std::abs(g.multiplier - cplx(4, 0)) < 1e-12);

  CHECK_THROWS_AS(fixed_points_multiplier(shift), NotLoxodromic);
  CHECK_THROWS_AS(fixed_points_multiplier(MoebiusMap()), NotLoxodromic);

  CHECK(projective_distance(from_fixed_points_multiplier(0.0, kInf, 4.0), kTimes4) < 1e-14);
  auto m9 = from_fixed_points_multiplier(1.0, -1.0, 9.0);
  CHECK(std::abs(m9.trace_squared() - cplx(9 + 2 + 1.0 / 9, 0)) < 1e-10);
  CHECK_THROWS_AS(from_fixed_points_multiplier(1.0, 1.0, 4.0), InvalidParameter);
  CHECK_THROWS_AS(from_fixed_points_multiplier(1.0, 2.0, 0.5), InvalidParameter);
}

TEST_CASE("fixed-point round trip on random loxodromic triples") {
  std::mt19937_64 rng(11);
  int checked = 0;
  while (checked < 100) {
    const cplx p = uniform_box(rng, -3, 3), q = uniform_box(rng, -3, 3);
    const cplx lambda = testing::polar_draw(rng, 1.5, 50.0);
    if (std::abs(p - q) < 0.1) continue;
    auto m = from_fixed_points_multiplier(p, q, lambda);
    auto f = fixed_points_multiplier(m);
    CHECK(chordal(f.repelling, p) < 1e-9);
    CHECK(chordal(f.attracting, q) < 1e-9);
    CHECK(std::abs(f.multiplier - lambda) / std::abs(lambda) < 1e-9);
    CHECK(chordal(m.apply(p), p) < 1e-10);
    CHECK(chordal(m.apply(q), q) < 1e-10);
    CHECK(std::abs(m.trace_squared() - (lambda + 2.0 + 1.0 / lambda)) < 1e-10 * std::abs(lambda));
    CHECK(projective_distance(from_fixed_points_multiplier(f.repelling, f.attracting, f.multiplier),
                              m) < 1e-9);
    ++checked;
  }
}

TEST_CASE("chordal distance and phi") {
  CHECK(chordal(cplx(1, 1), cplx(1, 1)) == 0.0);
  CHECK(chordal(0.0, kInf) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(phi(0.0, kInf) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(chordal(0.0, 1.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(phi(0.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(chordal(kInf, kInf) == 0.0);
}

TEST_CASE("properties on random maps and points") {
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 500; ++i) {
    const auto m1 = random_map(rng), m2 = random_map(rng);
    const ComplexPoint x = uniform_box(rng, -3, 3), y = uniform_box(rng, -3, 3);

    // phi(m x, m y) = s(x) s(y) phi(x, y)
    const double lhs = phi(m1.apply(x), m1.apply(y));
    const double rhs = m1.spherical_derivative(x) * m1.spherical_derivative(y) * phi(x, y);
    CHECK(rel(lhs, rhs) < 1e-9);

    const auto m12 = m1 * m2;
    CHECK(chordal(m12.apply(x), m1.apply(m2.apply(x))) < 1e-10);

    const double chain = m1.spherical_derivative(m2.apply(x)) * m2.spherical_derivative(x);
    CHECK(rel(m12.spherical_derivative(x), chain) < 1e-9);

    const auto h = random_map(rng);
    CHECK(m1.classify() == conjugate(m1, h).classify());
  }
}

TEST_CASE("classification") {
  CHECK(MoebiusMap().classify() == MoebiusClass::Identity);
  CHECK(MoebiusMap(1.0, 1.0, 0.0, 1.0).classify() == MoebiusClass::Parabolic);
  CHECK(kMinusInv.classify() == MoebiusClass::Elliptic);
  CHECK(kTimes4.classify() == MoebiusClass::Loxodromic);
  CHECK(MoebiusMap(cplx(0, 2), 0.0, 0.0, cplx(0, -0.5)).classify() == MoebiusClass::Loxodromic);
}

TEST_CASE("disk images") {
  const Disk d{cplx(2, 0), 0.5, false};
  const auto m = from_fixed_points_multiplier(cplx(-1, 0.3), cplx(0.5, 2), cplx(3, 1));
  const auto img = image(m, d);
  for (int k = 0; k < 16; ++k) {
    const cplx p = d.center + std::polar(d.radius, k * 0.4);
    CHECK(std::abs(img.boundary_offset(m.apply(p))) < 1e-10);
  }
  CHECK(img.contains(m.apply(d.center)));
}
