#include "bwp/polylog.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "bwp/errors.hpp"

namespace bwp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
// Rounding allowance per unit of absolute term mass.
constexpr double kRounding = 4.0 * kEps;

// Principal logarithm with arg in (-pi, pi]; a negative real with a signed
// zero imaginary part is taken on the +pi side.
cplx principal_log(cplx w) {
  if (w.imag() == 0.0) w.imag(0.0);
  return std::log(w);
}

double principal_arg(cplx w) {
  if (w.imag() == 0.0) w.imag(0.0);
  return std::arg(w);
}

double zeta_euler_maclaurin(int s) {
  // sum_{k<N} k^-s + N^(1-s)/(s-1) + N^-s/2 + sum_j B_2j/(2j)! s(s+1)..(s+2j-2) N^(-s-2j+1)
  constexpr int N = 20;
  constexpr std::array<double, 6> b2j_over_fact = {
      1.0 / 12.0, -1.0 / 720.0, 1.0 / 30240.0, -1.0 / 1209600.0, 1.0 / 47900160.0,
      -691.0 / 1307674368000.0};
  double head = 0.0;
  for (int k = N - 1; k >= 1; --k) head += std::pow(static_cast<double>(k), -s);
  const double n = N;
  double tail = std::pow(n, 1.0 - s) / (s - 1) + 0.5 * std::pow(n, -s);
  double rising = s;  // s (s+1) ... (s+2j-2)
  double power = std::pow(n, -s - 1.0);
  for (std::size_t j = 0; j < b2j_over_fact.size(); ++j) {
    tail += b2j_over_fact[j] * rising * power;
    rising *= (s + 2.0 * j + 1.0) * (s + 2.0 * j + 2.0);
    power /= n * n;
  }
  return head + tail;
}

// Bernoulli number B_k.
double bernoulli(int k) {
  if (k == 0) return 1.0;
  if (k == 1) return -0.5;
  if (k % 2 == 1) return 0.0;
  // B_2j = (-1)^(j+1) 2 (2j)! zeta(2j) / (2 pi)^(2j)
  double v = 2.0 * zeta_int(k);
  for (int i = 1; i <= k; ++i) v *= i / (2.0 * kPi);
  return (k / 2) % 2 == 1 ? v : -v;
}

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double factorial(int n) {
  double r = 1.0;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

struct Partial {
  cplx value;
  double truncation = 0.0;
  double mass = 0.0;  // sum of |terms|, for the rounding allowance
  int terms = 0;
};

// sum_{k>=1} z^k / k^n for |z| <= 1/2.
Partial direct_series(int n, cplx z, double target) {
  const double r = std::abs(z);
  Partial p;
  cplx power = z;
  for (int k = 1;; ++k) {
    const cplx term = power / std::pow(static_cast<double>(k), n);
    p.value += term;
    p.mass += std::abs(term);
    p.terms = k;
    const double next = std::pow(r, k + 1) / std::pow(k + 1.0, n) / (1.0 - r);
    if (next <= target || r == 0.0 || k > 4000) {
      p.truncation = r == 0.0 ? 0.0 : next;
      return p;
    }
    power *= z;
  }
}

// Expansion of Li_n(e^mu) around mu = 0, |mu| < 2 pi, n >= 2.
Partial log_series(int n, cplx z, double target) {
  Partial p;
  const cplx mu = principal_log(z);
  if (mu == 0.0) {
    p.value = zeta_int(n);
    p.mass = std::abs(p.value);
    p.terms = 1;
    return p;
  }
  auto push = [&p](cplx term) {
    p.value += term;
    p.mass += std::abs(term);
    ++p.terms;
  };
  cplx power = 1.0;  // mu^k / k!
  for (int k = 0; k <= n - 2; ++k) {
    push(zeta_int(n - k) * power);
    power *= mu / static_cast<double>(k + 1);
  }
  // power = mu^(n-1) / (n-1)!
  double harmonic = 0.0;
  for (int i = 1; i <= n - 1; ++i) harmonic += 1.0 / i;
  push(power * (harmonic - principal_log(-mu)));
  push(-0.5 * power * mu / static_cast<double>(n));  // zeta(0) mu^n / n!

  // zeta(1 - 2j) mu^(n-1+2j) / (n-1+2j)!
  //   = (-1)^j 2 zeta(2j) mu^(n-1) (mu / 2pi)^(2j) / prod_{i<n} (2j + i)
  const cplx lead = std::pow(mu, n - 1);
  const cplx rho = mu / (2.0 * kPi);
  const double rho2 = std::norm(rho);
  cplx rho_pow = 1.0;
  for (int j = 1;; ++j) {
    rho_pow *= rho * rho;
    double denom = 1.0;
    for (int i = 0; i < n; ++i) denom *= 2.0 * j + i;
    const double sign = j % 2 == 1 ? -1.0 : 1.0;
    push(sign * 2.0 * zeta_int(2 * j) * lead * rho_pow / denom);
    // |remaining terms| <= 2 zeta(2) |mu|^(n-1) rho^(2j+2) / ((2j+2)^n (1 - rho^2))
    const double bound = 2.0 * zeta_int(2) * std::abs(lead) * std::pow(rho2, j + 1) /
                         (std::pow(2.0 * j + 2.0, n) * (1.0 - rho2));
    if (bound <= target || j > 200) {
      p.truncation = bound;
      return p;
    }
  }
}

Partial li_partial(int n, cplx z, double target);

// Li_n(z) = -(-1)^n Li_n(1/z) - (2 pi i)^n / n! B_n(1/2 + log(-z) / (2 pi i)).
Partial inversion(int n, cplx z, double target) {
  Partial inner = li_partial(n, 1.0 / z, target);
  const cplx x = 0.5 + principal_log(-z) / cplx(0.0, 2.0 * kPi);
  cplx poly = 0.0;
  double poly_mass = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double bk = bernoulli(k);
    if (bk == 0.0) continue;
    const cplx term = binomial(n, k) * bk * std::pow(x, n - k);
    poly += term;
    poly_mass += std::abs(term);
  }
  const cplx scale = std::pow(cplx(0.0, 2.0 * kPi), n) / factorial(n);
  Partial p;
  const double sign = n % 2 == 0 ? -1.0 : 1.0;
  p.value = sign * inner.value - scale * poly;
  p.truncation = inner.truncation;
  p.mass = inner.mass + std::abs(scale) * poly_mass;
  p.terms = inner.terms + n + 1;
  return p;
}

Partial li_partial(int n, cplx z, double target) {
  if (n == 1) {
    Partial p;
    p.value = -principal_log(1.0 - z);
    p.mass = std::abs(p.value) + std::abs(z);
    p.terms = 1;
    return p;
  }
  const double r = std::abs(z);
  if (r <= 0.5) return direct_series(n, z, target);
  if (r >= 2.0) return inversion(n, z, target);
  return log_series(n, z, target);
}

PolylogResult<cplx> finish(const Partial& p) {
  return {p.value, p.truncation + kRounding * p.mass, p.terms};
}

}  // namespace

double zeta_int(int s) {
  if (s < 2) throw InvalidParameter("zeta_int requires s >= 2");
  static const std::vector<double> table = [] {
    std::vector<double> t(129, 0.0);
    t[2] = kPi * kPi / 6.0;
    for (int k = 3; k <= 128; ++k) t[k] = zeta_euler_maclaurin(k);
    return t;
  }();
  if (s < static_cast<int>(table.size())) return table[s];
  return 1.0 + std::pow(2.0, -s);
}

PolylogResult<cplx> li(int n, const ComplexPoint& z, double tol) {
  if (n < 1) throw InvalidParameter("li: order n must be >= 1");
  if (!(tol > 0.0)) throw InvalidParameter("li: tolerance must be positive");
  if (z.is_infinite()) throw SingularArgument("li: argument at infinity");
  const cplx w = z.value();
  if (n == 1 && w == 1.0) throw SingularArgument("li: pole of Li_1 at z = 1");
  // Leave room for the rounding allowance inside tol.
  PolylogResult<cplx> r = finish(li_partial(n, w, 0.5 * tol));
  // Li_n is real on (-inf, 1].
  if (w.imag() == 0.0 && w.real() <= 1.0) r.value.imag(0.0);
  if (r.error_bound > tol) {
    throw InvalidParameter("li: tolerance below attainable double precision");
  }
  return r;
}

PolylogResult<double> bloch_wigner_result(const ComplexPoint& z) {
  if (z.is_infinite()) return {0.0, 0.0, 0};
  const cplx w = z.value();
  if (w == 0.0 || w == 1.0) return {0.0, 0.0, 0};
  if (std::abs(w) > 1.0) {
    PolylogResult<double> r = bloch_wigner_result(ComplexPoint(1.0 / w));
    r.value = -r.value;
    return r;
  }
  const PolylogResult<cplx> li2 = finish(li_partial(2, w, 1e-17));
  const double log_term = principal_arg(1.0 - w) * std::log(std::abs(w));
  const double d = li2.value.imag() + log_term;
  if (!(std::abs(d) <= kBlochWignerMax + 1e-9)) {
    throw std::logic_error("bloch_wigner: value exceeds the global bound of D");
  }
  return {d, li2.error_bound + kRounding * std::abs(log_term), li2.terms_used};
}

double bloch_wigner(const ComplexPoint& z) { return bloch_wigner_result(z).value; }

PolylogResult<cplx> ramakrishnan_L(int m, const ComplexPoint& z, double tol) {
  if (m < 1) throw InvalidParameter("ramakrishnan_L: m must be >= 1");
  if (!(tol > 0.0)) throw InvalidParameter("ramakrishnan_L: tolerance must be positive");
  if (z.is_infinite() || z.value() == 0.0 || z.value() == 1.0) {
    throw SingularArgument("ramakrishnan_L: singular argument (z in {0, 1, inf})");
  }
  const cplx w = z.value();
  const double neg_log_abs = -std::log(std::abs(w));
  PolylogResult<cplx> out;
  for (int j = 1; j <= m; ++j) {
    const double coef = std::pow(neg_log_abs, m - j) / factorial(m - j);
    const PolylogResult<cplx> lj = finish(li_partial(j, w, 0.5 * tol / m));
    out.value += coef * lj.value;
    out.error_bound += std::abs(coef) * lj.error_bound;
    out.terms_used += lj.terms_used;
  }
  return out;
}

PolylogResult<double> ramakrishnan_D(int m, const ComplexPoint& z, double tol,
                                     OddCorrection odd) {
  const PolylogResult<cplx> L = ramakrishnan_L(m, z, tol);
  PolylogResult<double> out{0.0, L.error_bound, L.terms_used};
  if (m % 2 == 0) {
    out.value = L.value.imag();
  } else {
    const double denom =
        odd == OddCorrection::TwiceFactorial ? 2.0 * factorial(m) : factorial(2 * m);
    out.value = L.value.real() + std::pow(std::log(std::abs(z.value())), m) / denom;
  }
  return out;
}

}  // namespace bwp
