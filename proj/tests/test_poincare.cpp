#include <doctest.h>

#include <cmath>
#include <numbers>

#include "bwp/errors.hpp"
#include "bwp/poincare.hpp"
#include "bwp/polylog.hpp"
#include "bwp/summation.hpp"
#include "support.hpp"

using namespace bwp;

namespace {

const ComplexPoint kZ(cplx(0.7, 1.1));

SeriesOptions opts(int max_len, double tol = 1e-6, bool relative = true) {
  SeriesOptions o;
  o.max_len = max_len;
  o.tol = tol;
  o.relative_tol = relative;
  return o;
}

double standard_delta() {
  static const double d = [] {
    DeltaOptions o;
    o.resolution = 1e-6;
    return estimate_delta(standard_test_group(), o).delta;
  }();
  return d;
}

SeriesIntegrand constant_one() { return {[](const ComplexPoint&) { return 1.0; }, 1.0, "one"}; }

}  // namespace

TEST_CASE("trivial group: the series is D itself") {
  auto t = trivial_group();
  const auto D = SeriesIntegrand::bloch_wigner();
  for (auto mode : {WeightMode::Holomorphic, WeightMode::Absolute}) {
    auto e = evaluate(t, D, kZ, mode);
    CHECK(e.value == cplx(bloch_wigner(kZ), 0.0));
    CHECK(e.verdict == Verdict::Converged);
    CHECK(e.tail_estimate == 0.0);
    CHECK(e.terms == 1);
    auto a = automorphy_residual(t, D, {kZ, cplx(-2, 0.3)}, {}, mode);
    CHECK(a.residual == 0.0);
  }
}

TEST_CASE("standard group: both weight modes converge") {
  auto g = standard_test_group();
  const auto D = SeriesIntegrand::bloch_wigner();
  for (auto mode : {WeightMode::Holomorphic, WeightMode::Absolute}) {
    auto e = evaluate(g, D, kZ, mode, opts(10));
    CHECK(e.verdict == Verdict::Converged);
    CHECK(e.tail_estimate <= 1e-6 * std::abs(e.value));
    CHECK(e.terms == 1 + 4 * (59049 - 1) / 2);
    CHECK(e.comparability_min > 0);
    CHECK(e.comparability_max >= e.comparability_min);

    // bookkeeping
    CompensatedComplexSum s;
    for (cplx x : e.shells) s.add(x);
    CHECK(std::abs(s.value() - e.value) <= 1e-12 * std::abs(e.value));

    // termwise domination
    for (std::size_t n = 0; n < e.shells.size(); ++n) {
      CHECK(std::abs(e.shells[n]) <= D.bound * e.magnitudes[n] * (1 + 1e-12));
    }

    // verdict soundness
    auto deeper = evaluate(g, D, kZ, mode, opts(12));
    CHECK(std::abs(deeper.value - e.value) < e.tail_estimate);
  }
  auto abs_mode = evaluate(g, D, kZ, WeightMode::Absolute, opts(8));
  CHECK(abs_mode.value.imag() == 0.0);
  auto p = shell_sums(g, 1.0, 8, kZ);
  for (int n = 0; n <= 8; ++n) CHECK(testing::rel(abs_mode.magnitudes[n], p[n]) < 1e-12);
}

TEST_CASE("conjugation symmetry of the holomorphic series at real points") {
  // The standard group is invariant under complex conjugation and D is odd
  // under it, so conjugate orbit terms cancel in the real part.
  auto g = standard_test_group();
  for (double x : {0.0, 0.5, -1.3}) {
    auto e = evaluate(g, SeriesIntegrand::bloch_wigner(), x, WeightMode::Holomorphic, opts(8));
    CHECK(std::abs(e.value.real()) < 1e-10);
    auto a = evaluate(g, SeriesIntegrand::bloch_wigner(), x, WeightMode::Absolute, opts(8));
    CHECK(std::abs(a.value) < 1e-10);
  }
}

TEST_CASE("linearity in the integrand") {
  auto g = standard_test_group();
  const auto D = SeriesIntegrand::bloch_wigner();
  const auto D2 = D.scaled(2.0);
  CHECK(D2.bound == 2 * D.bound);
  auto a = evaluate(g, D, kZ, WeightMode::Holomorphic, opts(6));
  auto b = evaluate(g, D2, kZ, WeightMode::Holomorphic, opts(6));
  CHECK(b.value == 2.0 * a.value);
  for (std::size_t n = 0; n < a.shells.size(); ++n) CHECK(b.shells[n] == 2.0 * a.shells[n]);
}

TEST_CASE("evaluation errors and verdicts") {
  auto g = standard_test_group();
  const auto D = SeriesIntegrand::bloch_wigner();
  CHECK_THROWS_AS(evaluate(g, D, ComplexPoint::infinity(), WeightMode::Holomorphic),
                  InvalidParameter);
  CHECK_NOTHROW(evaluate(g, D, ComplexPoint::infinity(), WeightMode::Absolute, opts(4)));
  auto limit = fixed_points_multiplier(g.generators()[0]).attracting;
  CHECK_THROWS_AS(evaluate(g, D, limit, WeightMode::Absolute, opts(4)), NearLimitSet);
  SeriesIntegrand liar{[](const ComplexPoint&) { return 2.0; }, 1.0, "liar"};
  CHECK_THROWS_AS(evaluate(g, liar, kZ, WeightMode::Absolute, opts(3)), InvalidParameter);

  // Short truncation cannot meet a tight absolute tolerance.
  auto shallow = evaluate(g, D, kZ, WeightMode::Absolute, opts(3, 1e-15, false));
  CHECK(shallow.verdict != Verdict::Converged);

  // Twelve nearly tangent disks on a 4 x 3 grid: delta above 1, so the
  // s = 1 series of the constant diverges.
  GroupSpec spec;
  std::vector<Disk> grid;
  for (int y = 0; y < 3; ++y) {
    for (int x = 0; x < 4; ++x) grid.push_back({cplx(x - 1.5, y - 1.0), 0.49, false});
  }
  for (int i = 0; i < 6; ++i) {
    spec.generators.push_back({circle_pairing(grid[i + 6], grid[i]), grid[i + 6], grid[i]});
  }
  auto e = evaluate(build(spec), constant_one(), cplx(0, 3), WeightMode::Absolute, opts(5));
  CHECK(e.verdict == Verdict::Diverging);
  CHECK(std::isinf(e.tail_estimate));
}

TEST_CASE("strict evaluation is independent of the thread count") {
  auto g = standard_test_group();
  auto o1 = opts(8);
  auto o4 = opts(8);
  o4.exec = {4, ExecMode::Strict};
  auto of = opts(8);
  of.exec = {4, ExecMode::Fast};
  for (auto mode : {WeightMode::Holomorphic, WeightMode::Absolute}) {
    auto a = evaluate(g, SeriesIntegrand::bloch_wigner(), kZ, mode, o1);
    auto b = evaluate(g, SeriesIntegrand::bloch_wigner(), kZ, mode, o4);
    auto c = evaluate(g, SeriesIntegrand::bloch_wigner(), kZ, mode, of);
    CHECK(a.value == b.value);
    CHECK(a.shells == b.shells);
    CHECK(a.magnitudes == b.magnitudes);
    CHECK(std::abs(c.value - a.value) <= 1e-12 * std::abs(a.value));
  }
}

TEST_CASE("automorphy residual") {
  auto g = standard_test_group();
  const auto D = SeriesIntegrand::bloch_wigner();
  auto samples = fundamental_domain_samples(g, 4, 5);
  for (Letter l = 0; l < 4; ++l) {
    double prev = INFINITY;
    for (int N : {6, 8, 10}) {
      auto r = automorphy_residual(g, D, samples, {l}, WeightMode::Holomorphic, opts(N, 1e-12, false));
      for (const auto& s : r.samples) CHECK(s.residual <= s.bound);
      CHECK(r.residual < prev);
      prev = r.residual;
    }
    auto a = automorphy_residual(g, D, samples, {l}, WeightMode::Absolute, opts(8, 1e-12, false));
    for (const auto& s : a.samples) CHECK(s.residual <= s.bound);
  }
  auto word = automorphy_residual(g, D, samples, {0, 1}, WeightMode::Holomorphic, opts(8, 1e-12, false));
  for (const auto& s : word.samples) CHECK(s.residual <= s.bound);
}

TEST_CASE("Bers integral mechanics") {
  const ComplexPoint y(cplx(0.2, -0.4));
  PSMeasure atom;
  atom.atoms.push_back({y, 1.0});
  atom.delta = 0.5;
  NayataniDensity single(atom);

  BersOptions o;
  o.n_samples = 2000;
  SeriesIntegrand zero{[](const ComplexPoint&) { return 0.0; }, 0.0, "zero"};
  auto z = bers_integral(single, zero, o);
  CHECK(z.estimate == 0.0);
  CHECK(z.stderr_ == 0.0);

  // F^(2/delta) = phi^-2 for one atom; phi^2 cancels it exactly.
  SeriesIntegrand cancel{[y](const ComplexPoint& x) { return phi(x, y) * phi(x, y); }, 4.0, "phi2"};
  auto area = bers_integral(single, cancel, o);
  CHECK(std::abs(area.estimate - 4 * std::numbers::pi) < 1e-9);
  CHECK(!area.heavy_tail);

  SeriesIntegrand zsq{[y](const ComplexPoint& x) {
                        const auto v = x.to_sphere();
                        return phi(x, y) * phi(x, y) * v.z * v.z;
                      },
                      4.0, "z2"};
  auto second = bers_integral(single, zsq, o);
  CHECK(std::abs(second.estimate - 4 * std::numbers::pi / 3) < 5 * second.stderr_);

  // phi^-2 alone is not integrable at the atom.
  o.n_samples = 10000;
  auto heavy = bers_integral(single, constant_one(), o);
  CHECK(heavy.heavy_tail);
  CHECK(heavy.decile_shares[9] > 0.9);

  double total = 0;
  for (double s : heavy.decile_shares) total += s;
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("Bers integral over the standard group is deterministic and split by shell") {
  auto g = standard_test_group();
  NayataniDensity f(build_ps(g, standard_delta(), 6));
  BersOptions o;
  o.n_samples = 1000;
  auto a = bers_integral(g, f, SeriesIntegrand::bloch_wigner(), o);
  o.exec = {4, ExecMode::Strict};
  auto b = bers_integral(g, f, SeriesIntegrand::bloch_wigner(), o);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_ == b.stderr_);
  CHECK(a.n_samples == 1000);
  REQUIRE(a.shell_contributions.size() == 13);
  double sum = 0;
  int count = 0;
  for (std::size_t k = 0; k < a.shell_contributions.size(); ++k) {
    sum += a.shell_contributions[k];
    count += a.shell_counts[k];
  }
  CHECK(count == 1000);
  CHECK(std::abs(sum - a.estimate) <= 1e-9 * a.estimate);
  CHECK(a.estimate > 0);
}

TEST_CASE("convergence report") {
  auto cyc = cyclic_test_group(4.0);
  auto rc = convergence_report(cyc, cyc.default_basepoint(), 8);
  REQUIRE(rc.rows.size() == 3);
  for (const auto& row : rc.rows) {
    CHECK(testing::rel(row.ratios.back(), std::pow(4.0, -row.s)) < 1e-3);
  }

  auto g = standard_test_group();
  auto r = convergence_report(g, kZ, 10);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0].label == "delta");
  CHECK(r.rows[0].s == r.delta.delta);
  CHECK(r.rows[1].s == doctest::Approx((1 + r.delta.delta) / 2));
  CHECK(r.rows[2].s == 1.0);
  for (int n = 5; n < 10; ++n) CHECK(r.rows[2].ratios[n] < 1.0);
  for (int n = 7; n < 10; ++n) {
    CHECK(std::abs(r.rows[0].ratios[n] - 1.0) <= r.delta.ratio_tolerance);
  }
}
