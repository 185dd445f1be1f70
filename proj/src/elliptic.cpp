#include "bwp/elliptic.hpp"

#include <cmath>

#include "bwp/errors.hpp"
#include "bwp/summation.hpp"

namespace bwp {

namespace {

void check_params(cplx q, const ComplexPoint& x) {
  const double aq = std::abs(q);
  if (!(aq > 0.0) || !(aq < 1.0 - 1e-12)) {
    throw InvalidParameter("elliptic: require 0 < |q| < 1 - 1e-12");
  }
  if (x.is_infinite() || x.value() == 0.0) {
    throw SingularArgument("elliptic: x must be finite and non-zero");
  }
}

// Bound on sum_{k > K} |D(w_k)| with |w_k| = r^k m, 0 < r < 1.
double one_sided_bound(double r, double m, int K) {
  double total = 0.0;
  int k = K + 1;
  // Transitional terms: no small-argument estimate available yet.
  while (std::pow(r, k) * m > 0.5) {
    total += kBlochWignerMax;
    ++k;
  }
  // sum_{k' >= k} 2 r^k' m (1 + |log m| + k' |log r|)
  //   = 2m [ (1 + |log m|) S0 + |log r| S1 ],  S0 = r^k/(1-r),
  //   S1 = sum k' r^k' = k r^k/(1-r) + r^(k+1)/(1-r)^2.
  // |log|w|| <= |log m| + k'|log r| holds termwise.
  const double rk = std::pow(r, k);
  const double lr = -std::log(r);
  const double s0 = rk / (1.0 - r);
  const double s1 = k * rk / (1.0 - r) + rk * r / ((1.0 - r) * (1.0 - r));
  total += 2.0 * m * ((1.0 + std::abs(std::log(m))) * s0 + lr * s1);
  return total;
}

}  // namespace

double elliptic_tail_bound(cplx q, const ComplexPoint& x, int K) {
  check_params(q, x);
  if (K < 1) throw InvalidParameter("elliptic_tail_bound: K must be >= 1");
  const double r = std::abs(q);
  const double m = std::abs(x.value());
  // k > K: |q^k x| = r^k m.  k < -K: |D(q^k x)| = |D(q^|k| / x)|.
  return one_sided_bound(r, m, K) + one_sided_bound(r, 1.0 / m, K);
}

PolylogResult<double> elliptic_d2(const EllipticParams& p) {
  check_params(p.q, p.x);
  if (!(p.tol > 0.0)) throw InvalidParameter("elliptic: tolerance must be positive");
  const cplx x = p.x.value();
  CompensatedSum sum;
  sum.add(bloch_wigner(x));
  int K = 0;
  double bound = 0.0;
  cplx up = x, down = x;
  // Rounding allowance: a few ulps per summed term, relative to the bound of D.
  constexpr double per_term = 4e-16 * kBlochWignerMax;
  for (;;) {
    ++K;
    up *= p.q;
    down /= p.q;
    sum.add(bloch_wigner(up));
    sum.add(bloch_wigner(down));
    bound = elliptic_tail_bound(p.q, p.x, K);
    if (bound + per_term * (2 * K + 1) <= p.tol) break;
    if (K > 100000) {
      throw InvalidParameter("elliptic: tolerance not reachable");
    }
  }
  return {sum.value(), bound + per_term * (2 * K + 1), 2 * K + 1};
}

}  // namespace bwp
