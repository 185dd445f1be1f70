#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "bwp/moebius.hpp"
#include "bwp/parallel.hpp"
#include "bwp/schottky.hpp"

namespace bwp {

struct Atom {
  ComplexPoint point;
  double weight = 0.0;
};

// Finite atomic approximation of a Patterson-Sullivan measure: the orbit of
// the basepoint under the words of one shell, weighted by spherical
// derivative^delta and normalized to unit mass.
struct PSMeasure {
  std::vector<Atom> atoms;
  double delta = 0.0;
  int depth = 0;
  ComplexPoint basepoint = ComplexPoint::infinity();

  double total_mass() const;
};

PSMeasure build_ps(const SchottkyGroup& group, double delta, int depth,
                   std::optional<ComplexPoint> basepoint = std::nullopt,
                   const ExecPolicy& exec = {});

using TestFunction = std::function<double(const ComplexPoint&)>;

// 1 and the eight real spherical harmonics of degree 1 and 2, pulled back to
// the plane by inverse stereographic projection.
std::vector<TestFunction> default_test_functions();

// max over generators g (and their inverses) and test functions f of
//   |sum w_i f(x_i) - sum w_i s_g(x_i)^delta f(g x_i)| / (sum w_i |f(x_i)| + 1e-12)
// with s_g the spherical derivative. Zero for an exactly conformal measure.
double quasi_invariance_residual(const PSMeasure& measure, const SchottkyGroup& group,
                                 const std::vector<TestFunction>& test_functions);
inline double quasi_invariance_residual(const PSMeasure& measure, const SchottkyGroup& group) {
  return quasi_invariance_residual(measure, group, default_test_functions());
}

// F(x) = sum_i w_i phi(x, x_i)^-delta, the density whose power F^(2/delta)
// is the conformal factor of the invariant metric on the domain of
// discontinuity.
class NayataniDensity {
 public:
  explicit NayataniDensity(PSMeasure measure);

  const PSMeasure& measure() const { return measure_; }
  double delta() const { return measure_.delta; }

  // Throws SingularArgument when x is within chordal distance 1e-12 of an atom.
  double F(const ComplexPoint& x) const;
  // F(x)^(2/delta); requires delta > 0.
  double metric_factor(const ComplexPoint& x) const;
  // Chordal distance from x to the closest atom.
  double nearest_atom_distance(const ComplexPoint& x) const;

 private:
  PSMeasure measure_;
  // Atom positions on the unit sphere, cached at construction.
  std::vector<ComplexPoint::Vec3> sphere_;
};

struct ConformalityCheck {
  // max over samples and generators of |F(g x) s_g(x)^delta - F(x)| / F(x)
  double density_residual = 0.0;
  double measure_residual = 0.0;
  // density_residual / measure_residual
  double constant = 0.0;
};

// Samples points of the fundamental domain (uniform in the square
// [-window, window]^2 minus the defining disks and a margin around them) and
// compares the density-level defect with the measure-level residual.
ConformalityCheck conformality_check(const NayataniDensity& density, const SchottkyGroup& group,
                                     int n_samples, std::uint64_t seed, double window = 4.0);

struct ProfileRow {
  double radius;  // chordal distance to the limit point
  double F;
};

struct AsymptoticProfile {
  ComplexPoint limit_point;
  std::vector<ProfileRow> rows;
  double slope = 0.0;        // least-squares slope of log F against log radius
  double resolution = 0.0;   // smallest admissible radius
};

// Evaluates F at chordal distance r from y0 for each r in `radii` (strictly
// decreasing, all above the atom-resolution scale of the measure near y0:
// twice the distance from y0 to the nearest atom not located at y0).
// Throws InvalidParameter with a diagnostic otherwise.
AsymptoticProfile asymptotic_profile(const NayataniDensity& density, const ComplexPoint& y0,
                                     const std::vector<double>& radii, double direction = 0.0);

// CSV export: a "# {json header}" line with delta, depth and basepoint, a
// "re,im,weight" header row, then one row per atom with 17 significant
// digits. Infinity is written as "inf,0".
void write_measure_csv(std::ostream& os, const PSMeasure& measure);
PSMeasure read_measure_csv(std::istream& is);

}  // namespace bwp
