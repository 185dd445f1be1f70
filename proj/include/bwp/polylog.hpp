#pragma once

#include "bwp/moebius.hpp"

namespace bwp {

// Value of a polylogarithm evaluation together with a bound on the
// truncation error of the series actually summed (plus a floating-point
// rounding allowance) and the number of series terms used.
template <typename T>
struct PolylogResult {
  T value{};
  double error_bound = 0.0;
  int terms_used = 0;
};

// Classical polylogarithm Li_n(z), principal branch: Li_1(z) = -log(1 - z)
// with the principal logarithm, and the cut z in (1, inf) takes the value
// continuous from below (Im Li_2(2) = -pi log 2).
//
// Throws InvalidParameter for n < 1, tol <= 0 or a tolerance below double
// precision for the given argument; SingularArgument for n = 1, z = 1 and for
// z = infinity.
PolylogResult<cplx> li(int n, const ComplexPoint& z, double tol = 1e-12);

// Bloch-Wigner dilogarithm D(z) = Im Li_2(z) + arg(1 - z) log|z|, extended by
// continuity with D(0) = D(1) = D(inf) = 0.
double bloch_wigner(const ComplexPoint& z);
// Same value with the error bound of the underlying Li_2 evaluation.
PolylogResult<double> bloch_wigner_result(const ComplexPoint& z);

// Global maximum of |D|, attained at exp(i pi / 3).
inline constexpr double kBlochWignerMax = 1.0149416064096536;

// L_m(z) = sum_{j=1..m} (-log|z|)^(m-j) / (m-j)! Li_j(z), each Li_j to tol/m.
PolylogResult<cplx> ramakrishnan_L(int m, const ComplexPoint& z, double tol = 1e-12);

// How to read the odd-m correction term (log|z|)^m / 2m!.
enum class OddCorrection {
  TwiceFactorial,     // (log|z|)^m / (2 * m!)
  FactorialOfTwiceM,  // (log|z|)^m / (2m)!
};

// D_m(z) = Im L_m(z) for even m, Re L_m(z) + (log|z|)^m / (2 m!) for odd m.
PolylogResult<double> ramakrishnan_D(int m, const ComplexPoint& z, double tol = 1e-12,
                                     OddCorrection odd = OddCorrection::TwiceFactorial);

// Riemann zeta at integers s >= 2.
double zeta_int(int s);

}  // namespace bwp
