#pragma once

#include "bwp/moebius.hpp"
#include "bwp/polylog.hpp"

namespace bwp {

struct EllipticParams {
  cplx q;
  ComplexPoint x;
  double tol = 1e-12;
};

// Bloch's elliptic dilogarithm: the bilateral average sum_{k in Z} D(q^k x)
// over the Tate curve C* / q^Z. Terms are added as k = 0, then the symmetric
// pairs +-1, +-2, ... with compensated summation until the tail bound drops
// below tol.
//
// Throws InvalidParameter if |q| is not in (0, 1 - 1e-12) or tol <= 0,
// SingularArgument if x is 0 or infinity.
PolylogResult<double> elliptic_d2(const EllipticParams& p);

// Upper bound on sum_{|k| > K} |D(q^k x)|. Terms with |q^k x| (or |q^k x|^-1)
// below 1/2 use |D(w)| <= 2|w|(1 + |log|w||); the rest use the global bound
// of D. Monotone non-increasing in K.
double elliptic_tail_bound(cplx q, const ComplexPoint& x, int K);

}  // namespace bwp
