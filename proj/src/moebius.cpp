#include "bwp/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "bwp/errors.hpp"

namespace bwp {

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

// sqrt(1 + |z|^2) without overflow.
double lift(cplx z) { return std::hypot(1.0, std::abs(z)); }

}  // namespace

ComplexPoint::ComplexPoint(cplx z) : z_(z) {
  if (!finite(z)) {
    z_ = 0.0;
    inf_ = true;
    return;
  }
  // Canonical zeros keep principal-branch logarithms on the (-pi, pi] side.
  if (z_.real() == 0.0) z_.real(0.0);
  if (z_.imag() == 0.0) z_.imag(0.0);
}

cplx ComplexPoint::value() const {
  if (inf_) throw SingularArgument("finite value requested for the point at infinity");
  return z_;
}

ComplexPoint::Vec3 ComplexPoint::to_sphere() const {
  if (inf_) return {0.0, 0.0, 1.0};
  const double r2 = std::norm(z_);
  if (r2 > 1e300) return {0.0, 0.0, 1.0};
  const double s = 1.0 / (1.0 + r2);
  return {2.0 * z_.real() * s, 2.0 * z_.imag() * s, (r2 - 1.0) * s};
}

ComplexPoint ComplexPoint::from_sphere(const Vec3& v) {
  if (v.z >= 1.0) return infinity();
  return ComplexPoint(cplx(v.x, v.y) / (1.0 - v.z));
}

std::ostream& operator<<(std::ostream& os, const ComplexPoint& p) {
  if (p.is_infinite()) return os << "inf";
  return os << p.value();
}

const char* to_string(MoebiusClass c) {
  switch (c) {
    case MoebiusClass::Identity:
      return "identity";
    case MoebiusClass::Elliptic:
      return "elliptic";
    case MoebiusClass::Parabolic:
      return "parabolic";
    case MoebiusClass::Loxodromic:
      return "loxodromic";
  }
  return "?";
}

MoebiusMap::MoebiusMap(cplx a, cplx b, cplx c, cplx d) {
  const cplx det = a * d - b * c;
  if (det == 0.0 || !finite(det)) {
    throw InvalidParameter("Moebius map with zero or non-finite determinant");
  }
  const cplx s = std::sqrt(det);
  a_ = a / s;
  b_ = b / s;
  c_ = c / s;
  d_ = d / s;
}

ComplexPoint MoebiusMap::apply(const ComplexPoint& z) const {
  cplx num, den;
  if (z.is_infinite()) {
    num = a_;
    den = c_;
  } else {
    const cplx w = z.value();
    num = a_ * w + b_;
    den = c_ * w + d_;
  }
  if (den == 0.0) return ComplexPoint::infinity();
  return ComplexPoint(num / den);
}

MoebiusMap MoebiusMap::inverse() const {
  MoebiusMap m;
  m.a_ = d_;
  m.b_ = -b_;
  m.c_ = -c_;
  m.d_ = a_;
  return m;
}

cplx MoebiusMap::derivative(const ComplexPoint& z) const {
  if (z.is_infinite()) {
    throw SingularArgument("holomorphic derivative undefined at infinity");
  }
  const cplx den = c_ * z.value() + d_;
  if (den == 0.0) throw SingularArgument("derivative undefined at pole");
  return 1.0 / (den * den);
}

double MoebiusMap::spherical_derivative(const ComplexPoint& z) const {
  // For a unit-determinant matrix the chordal stretch is
  // (1 + |z|^2) / (|az + b|^2 + |cz + d|^2).
  if (z.is_infinite()) return 1.0 / (std::norm(a_) + std::norm(c_));
  const cplx w = z.value();
  if (std::abs(w) <= 1.0) {
    return (1.0 + std::norm(w)) / (std::norm(a_ * w + b_) + std::norm(c_ * w + d_));
  }
  const cplx u = 1.0 / w;
  return (1.0 + std::norm(u)) / (std::norm(a_ + b_ * u) + std::norm(c_ + d_ * u));
}

ComplexPoint MoebiusMap::pole() const {
  if (c_ == 0.0) return ComplexPoint::infinity();
  return ComplexPoint(-d_ / c_);
}

bool MoebiusMap::is_identity(double tol) const {
  return std::abs(b_) <= tol && std::abs(c_) <= tol && std::abs(a_ - d_) <= tol &&
         std::abs(a_ * a_ - 1.0) <= 4 * tol;
}

MoebiusClass MoebiusMap::classify() const {
  if (is_identity(1e-12)) return MoebiusClass::Identity;
  const cplx t2 = trace_squared();
  constexpr double tol = 1e-9;
  if (std::abs(t2 - 4.0) <= tol) return MoebiusClass::Parabolic;
  if (std::abs(t2.imag()) <= tol && t2.real() >= 0.0 && t2.real() < 4.0) {
    return MoebiusClass::Elliptic;
  }
  return MoebiusClass::Loxodromic;
}

MoebiusMap compose(const MoebiusMap& m1, const MoebiusMap& m2) {
  MoebiusMap m;
  m.a_ = m1.a_ * m2.a_ + m1.b_ * m2.c_;
  m.b_ = m1.a_ * m2.b_ + m1.b_ * m2.d_;
  m.c_ = m1.c_ * m2.a_ + m1.d_ * m2.c_;
  m.d_ = m1.c_ * m2.b_ + m1.d_ * m2.d_;
  // The computed ad - bc carries rounding noise ~ eps (|ad| + |bc|); for long
  // words that noise exceeds 1 and dividing by it would corrupt the map. Only
  // drift above the noise floor is removed.
  const cplx det = m.a_ * m.d_ - m.b_ * m.c_;
  const double noise =
      64.0 * std::numeric_limits<double>::epsilon() *
      (std::abs(m.a_) * std::abs(m.d_) + std::abs(m.b_) * std::abs(m.c_));
  const double drift = std::abs(det - 1.0);
  if (drift > 1e-13 && drift > noise) {
    const cplx s = std::sqrt(det);
    m.a_ /= s;
    m.b_ /= s;
    m.c_ /= s;
    m.d_ /= s;
  }
  return m;
}

MoebiusMap conjugate(const MoebiusMap& m, const MoebiusMap& h) {
  return compose(compose(h, m), h.inverse());
}

double projective_distance(const MoebiusMap& m1, const MoebiusMap& m2) {
  auto dist = [&](double sign) {
    return std::max({std::abs(m1.a() - sign * m2.a()), std::abs(m1.b() - sign * m2.b()),
                     std::abs(m1.c() - sign * m2.c()), std::abs(m1.d() - sign * m2.d())});
  };
  return std::min(dist(1.0), dist(-1.0));
}

std::ostream& operator<<(std::ostream& os, const MoebiusMap& m) {
  return os << "[" << m.a() << ", " << m.b() << "; " << m.c() << ", " << m.d() << "]";
}

FixedPointData fixed_points_multiplier(const MoebiusMap& m) {
  if (m.classify() != MoebiusClass::Loxodromic) {
    throw NotLoxodromic(std::string("not loxodromic (") + to_string(m.classify()) + ")");
  }
  const cplx a = m.a(), b = m.b(), c = m.c(), d = m.d();
  ComplexPoint z1, z2;
  cplx e1, e2;  // eigenvalues c*z + d attached to each fixed point
  const double scale = std::abs(a) + std::abs(d);
  if (std::abs(c) <= 1e-14 * scale) {
    z1 = ComplexPoint::infinity();
    e1 = a;
    z2 = ComplexPoint(b / (d - a));
    e2 = d;
  } else {
    // c z^2 + (d - a) z - b = 0, discriminant trace^2 - 4.
    const cplx B = d - a;
    const cplx sq = std::sqrt(m.trace_squared() - 4.0);
    const double s = (std::conj(B) * sq).real() >= 0.0 ? 1.0 : -1.0;
    const cplx q = -0.5 * (B + s * sq);
    z1 = ComplexPoint(q / c);
    z2 = ComplexPoint(-b / q);
    e1 = c * z1.value() + d;
    e2 = c * z2.value() + d;
  }
  FixedPointData out;
  if (std::abs(e1) >= std::abs(e2)) {
    out.attracting = z1;
    out.repelling = z2;
    out.multiplier = e1 * e1;
  } else {
    out.attracting = z2;
    out.repelling = z1;
    out.multiplier = e2 * e2;
  }
  return out;
}

MoebiusMap from_fixed_points_multiplier(const ComplexPoint& p, const ComplexPoint& q,
                                        cplx lambda) {
  if (p == q) throw InvalidParameter("fixed points must be distinct");
  if (!(std::abs(lambda) > 1.0) || !finite(lambda)) {
    throw InvalidParameter("multiplier must satisfy |lambda| > 1");
  }
  // T sends p -> 0 and q -> infinity.
  MoebiusMap T;
  if (q.is_infinite()) {
    T = MoebiusMap(1.0, -p.value(), 0.0, 1.0);
  } else if (p.is_infinite()) {
    T = MoebiusMap(0.0, 1.0, 1.0, -q.value());
  } else {
    T = MoebiusMap(1.0, -p.value(), 1.0, -q.value());
  }
  const cplx mu = std::sqrt(lambda);
  const MoebiusMap scale(mu, 0.0, 0.0, 1.0 / mu);
  return compose(T.inverse(), compose(scale, T));
}

double chordal(const ComplexPoint& x, const ComplexPoint& y) {
  if (x.is_infinite() && y.is_infinite()) return 0.0;
  if (x.is_infinite()) return 2.0 / lift(y.value());
  if (y.is_infinite()) return 2.0 / lift(x.value());
  const cplx u = x.value(), v = y.value();
  return std::min(2.0, 2.0 * std::abs(u - v) / (lift(u) * lift(v)));
}

double phi(const ComplexPoint& x, const ComplexPoint& y) {
  const double c = chordal(x, y);
  return 0.5 * c * c;
}

bool Disk::contains(const ComplexPoint& z, double slack) const {
  if (z.is_infinite()) return outer;
  const double dist = std::abs(z.value() - center);
  return outer ? dist > radius * (1.0 + slack) : dist < radius * (1.0 - slack);
}

double Disk::boundary_offset(const ComplexPoint& z) const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (z.is_infinite()) return outer ? -inf : inf;
  const double dist = std::abs(z.value() - center);
  return outer ? radius - dist : dist - radius;
}

Disk image(const MoebiusMap& m, const Disk& disk) {
  const ComplexPoint pole = m.pole();
  if (pole.is_infinite()) {
    const ComplexPoint c = m.apply(disk.center);
    return {c.value(), disk.radius * std::abs(m.a() / m.d()), disk.outer};
  }
  const cplx zp = pole.value();
  const cplx rel = zp - disk.center;
  const double dist = std::abs(rel);
  if (std::abs(dist - disk.radius) <= 1e-14 * std::max(1.0, disk.radius)) {
    throw SingularArgument("disk boundary passes through the pole; image is a half-plane");
  }
  // The point symmetric to the pole maps to the center of the image circle.
  const ComplexPoint mirror =
      dist == 0.0 ? ComplexPoint::infinity()
                  : ComplexPoint(disk.center + disk.radius * disk.radius / std::conj(rel));
  const cplx new_center = m.apply(mirror).value();
  const cplx away = dist == 0.0 ? cplx(1.0, 0.0) : -rel / dist;
  const cplx boundary = m.apply(ComplexPoint(disk.center + disk.radius * away)).value();
  const bool pole_inside = disk.outer ? dist > disk.radius : dist < disk.radius;
  return {new_center, std::abs(boundary - new_center), pole_inside};
}

}  // namespace bwp
