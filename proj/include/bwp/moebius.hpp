#pragma once

#include <complex>
#include <iosfwd>

namespace bwp {

using cplx = std::complex<double>;

// A point of the Riemann sphere. Infinity has a single representation; the
// finite value of an infinite point is always zero.
class ComplexPoint {
 public:
  ComplexPoint() = default;
  ComplexPoint(cplx z);  // NOLINT(google-explicit-constructor)
  ComplexPoint(double x) : ComplexPoint(cplx(x, 0.0)) {}  // NOLINT

  static ComplexPoint infinity() {
    ComplexPoint p;
    p.inf_ = true;
    return p;
  }

  bool is_infinite() const { return inf_; }
  bool is_finite() const { return !inf_; }
  // Finite value; throws SingularArgument for the point at infinity.
  cplx value() const;

  // Point of the unit sphere in R^3 under inverse stereographic projection
  // (north pole = infinity).
  struct Vec3 {
    double x, y, z;
  };
  Vec3 to_sphere() const;
  static ComplexPoint from_sphere(const Vec3& v);

  friend bool operator==(const ComplexPoint& a, const ComplexPoint& b) {
    return a.inf_ == b.inf_ && a.z_ == b.z_;
  }

 private:
  cplx z_{0.0, 0.0};
  bool inf_ = false;
};

std::ostream& operator<<(std::ostream& os, const ComplexPoint& p);

enum class MoebiusClass { Identity, Elliptic, Parabolic, Loxodromic };

const char* to_string(MoebiusClass c);

// Moebius transformation z -> (az+b)/(cz+d), stored with ad - bc = 1.
class MoebiusMap {
 public:
  // Identity.
  MoebiusMap() = default;
  // Normalizes to unit determinant; throws InvalidParameter if ad - bc = 0.
  MoebiusMap(cplx a, cplx b, cplx c, cplx d);

  static MoebiusMap identity() { return {}; }

  cplx a() const { return a_; }
  cplx b() const { return b_; }
  cplx c() const { return c_; }
  cplx d() const { return d_; }
  cplx trace() const { return a_ + d_; }
  cplx trace_squared() const { return trace() * trace(); }
  cplx det() const { return a_ * d_ - b_ * c_; }

  ComplexPoint apply(const ComplexPoint& z) const;
  ComplexPoint operator()(const ComplexPoint& z) const { return apply(z); }

  MoebiusMap inverse() const;

  // Holomorphic derivative (cz+d)^-2. Throws SingularArgument at infinity and
  // at the pole -d/c.
  cplx derivative(const ComplexPoint& z) const;

  // Stretch factor of the map in the chordal metric; total on the sphere.
  double spherical_derivative(const ComplexPoint& z) const;

  // Pole -d/c (infinity when c = 0).
  ComplexPoint pole() const;

  MoebiusClass classify() const;
  bool is_identity(double tol = 1e-12) const;

 private:
  friend MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2);
  cplx a_{1.0, 0.0}, b_{0.0, 0.0}, c_{0.0, 0.0}, d_{1.0, 0.0};
};

// m1 o m2. Determinant drift above the rounding noise of ad - bc is
// divided out.
MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2);
inline MoebiusMap operator*(const MoebiusMap& m1, const MoebiusMap& m2) {
  return compose(m1, m2);
}
inline MoebiusMap inverse(const MoebiusMap& m) { return m.inverse(); }

// h o m o h^-1
MoebiusMap conjugate(const MoebiusMap& m, const MoebiusMap& h);

// Largest entrywise distance between m1 and +-m2.
double projective_distance(const MoebiusMap& m1, const MoebiusMap& m2);

std::ostream& operator<<(std::ostream& os, const MoebiusMap& m);

// Fixed points and multiplier of a loxodromic map. In the coordinate
// w = (z - repelling)/(z - attracting) the map acts as w -> multiplier * w,
// with |multiplier| > 1 and trace^2 = multiplier + 2 + 1/multiplier.
struct FixedPointData {
  ComplexPoint attracting;
  ComplexPoint repelling;
  cplx multiplier;
};

FixedPointData fixed_points_multiplier(const MoebiusMap& m);

// Loxodromic map with repelling fixed point p, attracting fixed point q and
// multiplier lambda (|lambda| > 1). (0, inf, 4) gives z -> 4z.
MoebiusMap from_fixed_points_multiplier(const ComplexPoint& p, const ComplexPoint& q,
                                        cplx lambda);

// Chordal distance on the unit sphere, in [0, 2].
double chordal(const ComplexPoint& x, const ComplexPoint& y);

// phi(x, y) = chordal(x, y)^2 / 2 = 1 - cos(r), r the great-circle distance.
double phi(const ComplexPoint& x, const ComplexPoint& y);

// Closed round disk on the sphere. `outer` disks are the complement of the
// open Euclidean disk |z - center| < radius, so they contain infinity.
struct Disk {
  cplx center;
  double radius = 0.0;
  bool outer = false;

  // Strict interior test; points within `slack` (relative to the radius) of
  // the boundary count as outside.
  bool contains(const ComplexPoint& z, double slack = 0.0) const;
  // Signed Euclidean distance to the boundary, negative inside.
  double boundary_offset(const ComplexPoint& z) const;
};

// Image of a disk under a Moebius map. Throws SingularArgument if the image
// is a half-plane (the pole of m lies on the boundary circle).
Disk image(const MoebiusMap& m, const Disk& disk);

}  // namespace bwp
