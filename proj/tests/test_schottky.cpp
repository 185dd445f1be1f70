#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "bwp/errors.hpp"
#include "bwp/schottky.hpp"
#include "support.hpp"

using namespace bwp;

namespace {

bool has_kind(const ValidationReport& r, Violation::Kind k) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [k](const Violation& v) { return v.kind == k; });
}

ValidationReport build_failure(const GroupSpec& spec) {
  try {
    build(spec);
  } catch (const GroupValidationError& e) {
    return e.report();
  }
  return {};
}

bool is_reduced(const SchottkyGroup& g, const std::vector<Letter>& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == g.inverse_letter(w[i - 1])) return false;
  }
  return true;
}

double delta_of(const SchottkyGroup& g, int depth = 10, double resolution = 1e-3) {
  DeltaOptions o;
  o.max_depth = depth;
  o.resolution = resolution;
  return estimate_delta(g, o).delta;
}

}  // namespace

TEST_CASE("standard test group builds and validates") {
  auto g = standard_test_group();
  CHECK(g.rank() == 2);
  CHECK(g.disks().size() == 4);
  CHECK(validate(g).ok());
  CHECK(g.classical());
  CHECK(g.default_basepoint().is_infinite());
  for (const auto& m : g.generators()) CHECK(m.classify() == MoebiusClass::Loxodromic);
}

TEST_CASE("validation failures") {
  SUBCASE("overlapping disks") {
    const Disk left{-0.4, 0.5, false}, right{0.4, 0.5, false};
    GroupSpec spec;
    spec.generators.push_back({circle_pairing(left, right), left, right});
    auto r = build_failure(spec);
    REQUIRE(!r.ok());
    auto it = std::find_if(r.violations.begin(), r.violations.end(), [](const Violation& v) {
      return v.kind == Violation::Kind::DisksOverlap;
    });
    REQUIRE(it != r.violations.end());
    CHECK(it->first >= 0);
    CHECK(it->second > it->first);
  }
  SUBCASE("fixed point at infinity outside cyclic mode") {
    GroupSpec spec;
    spec.generators.push_back({MoebiusMap(2.0, 0.0, 0.0, 0.5), std::nullopt, std::nullopt});
    auto r = build_failure(spec);
    CHECK(has_kind(r, Violation::Kind::InfinityInsideDisk));
    CHECK_NOTHROW(cyclic_test_group(4.0));
  }
  SUBCASE("reversed pairing direction") {
    auto g = standard_test_group();
    auto disks = g.disks();
    std::swap(disks[0], disks[2]);
    auto r = validate(g.generators(), disks, false);
    CHECK(has_kind(r, Violation::Kind::PairingIncorrect));
  }
  SUBCASE("tangent disks") {
    CHECK_THROWS_AS(standard_test_group(std::sqrt(2.0)), GroupValidationError);
    CHECK_NOTHROW(standard_test_group(std::sqrt(2.0) - 1e-6));
  }
  SUBCASE("parabolic generator") {
    GroupSpec spec;
    spec.generators.push_back({MoebiusMap(1.0, 0.0, 1.0, 1.0), std::nullopt, std::nullopt});
    CHECK(has_kind(build_failure(spec), Violation::Kind::NotLoxodromic));
  }
}

TEST_CASE("isometric circles pair correctly") {
  const auto m = from_fixed_points_multiplier(cplx(-1, 0), cplx(1, 0), 9.0);
  GroupSpec spec;
  spec.generators.push_back({m, std::nullopt, std::nullopt});
  auto g = build(spec);
  CHECK(validate(g).ok());
  const Disk& target = g.disk(0);
  CHECK(std::abs(target.center - m.a() / m.c()) < 1e-12);
  CHECK(std::abs(target.radius - 1 / std::abs(m.c())) < 1e-12);
}

TEST_CASE("word enumeration") {
  auto g = standard_test_group();
  CHECK(enumerate(g, 0).size() == 1);
  CHECK(enumerate(g, 1).size() == 5);
  CHECK(enumerate(g, 2).size() == 17);

  auto words = enumerate(g, 6);
  std::set<std::vector<Letter>> seen;
  std::vector<std::size_t> per_shell(7, 0);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const auto& w = words[i];
    CHECK(is_reduced(g, w.letters));
    CHECK(seen.insert(w.letters).second);
    ++per_shell[w.length()];
    if (i > 0) {
      const auto& p = words[i - 1].letters;
      CHECK((p.size() < w.letters.size() || (p.size() == w.letters.size() && p < w.letters)));
    }
    MoebiusMap fold;
    for (Letter l : w.letters) fold = fold * g.letter_map(l);
    CHECK(projective_distance(fold, w.map) < 1e-10);
    CHECK(testing::rel(w.basepoint_derivative, w.map.spherical_derivative(g.default_basepoint())) <
          1e-12);
  }
  for (int n = 0; n <= 6; ++n) CHECK(per_shell[n] == shell_size(2, n));
  // every reduced word up to length 6: 1 + 4 (3^6 - 1) / 2
  CHECK(words.size() == 1 + 4 * (729 - 1) / 2);
}

TEST_CASE("shell sizes") {
  CHECK(shell_size(2, 0) == 1);
  CHECK(shell_size(2, 1) == 4);
  CHECK(shell_size(2, 10) == 78732);
  CHECK(shell_size(3, 4) == 6 * 125);
  auto g = standard_test_group();
  std::vector<std::uint64_t> counts(11, 0);
  for_each_word(g, 10, g.default_basepoint(), [&](const Word& w) { ++counts[w.length()]; });
  for (int n = 0; n <= 10; ++n) CHECK(counts[n] == shell_size(2, n));
  auto s0 = shell_sums(g, 0.0, 10);
  for (int n = 0; n <= 10; ++n) CHECK(s0[n] == static_cast<double>(shell_size(2, n)));
}

TEST_CASE("limit set samples") {
  auto cyc = cyclic_test_group(4.0);
  for (int depth = 1; depth <= 5; ++depth) {
    auto s = limit_set(cyc, depth);
    REQUIRE(!s.points.empty());
    for (const auto& p : s.points) {
      CHECK(std::min(chordal(p, 0.0), chordal(p, ComplexPoint::infinity())) < 1e-12);
    }
  }

  auto g = standard_test_group();
  auto s1 = limit_set(g, 1);
  CHECK(s1.points.size() == 4 * 3);
  for (const auto& p : s1.points) {
    CHECK(std::any_of(g.disks().begin(), g.disks().end(),
                      [&](const Disk& d) { return d.contains(p); }));
  }

  auto s3 = limit_set(g, 3);
  auto words = enumerate(g, 3);
  std::vector<std::vector<Letter>> shell3;
  for (const auto& w : words) {
    if (w.length() == 3) shell3.push_back(w.letters);
  }
  for (std::size_t i = 0; i < s3.points.size(); ++i) {
    const auto& w = shell3[s3.word_indices[i]];
    const Disk d = g.word_disk(w);
    CHECK(d.boundary_offset(s3.points[i]) < 1e-9);
  }
}

TEST_CASE("reduction to the fundamental domain") {
  auto g = standard_test_group();
  const ComplexPoint outside(cplx(0.3, -0.7));
  auto r0 = reduce_to_fundamental_domain(g, outside);
  CHECK(r0.word.empty());
  CHECK(r0.point == outside);

  const ComplexPoint one_step = g.letter_map(0).apply(outside);
  auto r1 = reduce_to_fundamental_domain(g, one_step);
  REQUIRE(r1.word.size() == 1);
  CHECK(g.letter_map(r1.word[0]).apply(one_step) == r1.point);
  CHECK(chordal(r1.point, outside) < 1e-12);

  std::mt19937_64 rng(77);
  auto base = fundamental_domain_samples(g, 50, 3);
  auto words = enumerate(g, 3);
  std::uniform_int_distribution<std::size_t> pick(words.size() - 36, words.size() - 1);
  for (const auto& z0 : base) {
    const auto& w = words[pick(rng)];
    REQUIRE(w.length() == 3);
    const ComplexPoint z = w.map.apply(z0);
    auto r = reduce_to_fundamental_domain(g, z);
    CHECK(r.word.size() == 3);
    CHECK(chordal(r.point, z0) < 1e-10);
    auto again = reduce_to_fundamental_domain(g, r.point);
    CHECK(again.word.empty());
  }

  auto limit = limit_set(g, 6).points.front();
  CHECK_THROWS_AS(reduce_to_fundamental_domain(g, limit, 3), NearLimitSet);
  // A fixed point only escapes its disk through rounding; the stretch cap catches it.
  const auto fixed = fixed_points_multiplier(g.generators()[1]).attracting;
  CHECK_THROWS_AS(reduce_to_fundamental_domain(g, fixed), NearLimitSet);
}

TEST_CASE("fundamental domain samples stay clear of the disks") {
  auto g = standard_test_group();
  auto pts = fundamental_domain_samples(g, 200, 9);
  CHECK(pts.size() == 200);
  for (const auto& p : pts) {
    for (const auto& d : g.disks()) CHECK(d.boundary_offset(p) >= 0.1 * d.radius);
  }
  CHECK(pts == fundamental_domain_samples(g, 200, 9));
}

TEST_CASE("shell sums") {
  auto cyc = cyclic_test_group(4.0);
  for (double s : {0.3, 1.0, 1.7}) {
    auto p = shell_sums(cyc, s, 8);
    CHECK(testing::rel(p[8] / p[7], std::pow(4.0, -s)) < 1e-4);
  }
  auto g = standard_test_group();
  auto p = shell_sums(g, 1.0, 10);
  for (int n = 5; n < 10; ++n) {
    const double r = p[n + 1] / p[n];
    CHECK(r < 1.0);
    CHECK(std::abs(r / (p[6] / p[5]) - 1) < 0.1);
  }
}

TEST_CASE("strict shell sums do not depend on the thread count") {
  auto g = standard_test_group();
  ExecPolicy one{1, ExecMode::Strict}, four{4, ExecMode::Strict}, fast{4, ExecMode::Fast};
  auto a = shell_sums(g, 0.7, 9, g.default_basepoint(), one);
  auto b = shell_sums(g, 0.7, 9, g.default_basepoint(), four);
  auto c = shell_sums(g, 0.7, 9, g.default_basepoint(), fast);
  CHECK(a == b);
  for (std::size_t n = 0; n < a.size(); ++n) CHECK(testing::rel(c[n], a[n]) < 1e-12);
}

TEST_CASE("critical exponent") {
  DeltaOptions coarse;
  coarse.max_depth = 10;
  auto cyc = estimate_delta(cyclic_test_group(4.0), coarse);
  CHECK(cyc.delta <= 0.01);

  auto g = standard_test_group();
  auto e10 = estimate_delta(g, coarse);
  CHECK(e10.delta < 1.0);
  CHECK(e10.lo <= e10.delta);
  CHECK(e10.delta <= e10.hi);
  CHECK(e10.hi - e10.lo <= coarse.resolution);
  CHECK(e10.shell_ratios.size() == 10);
  CHECK(std::abs(e10.shell_ratios.back() - 1) <= e10.ratio_tolerance);
  DeltaOptions deeper = coarse;
  deeper.max_depth = 12;
  CHECK(std::abs(estimate_delta(g, deeper).delta - e10.delta) <= 0.01);

  CHECK(delta_of(standard_test_group(0.25)) < delta_of(g));
  DeltaOptions bad;
  bad.resolution = 0.0;
  CHECK_THROWS_AS(estimate_delta(g, bad), InvalidParameter);
}

TEST_CASE("critical exponent is invariant under conjugation and Nielsen moves") {
  auto g = standard_test_group();
  const double d0 = delta_of(g);

  const MoebiusMap h(cplx(1.1, 0.4), cplx(0.2, -0.3), 0.0, 1.0 / cplx(1.1, 0.4));
  std::vector<MoebiusMap> gens;
  for (const auto& m : g.generators()) gens.push_back(conjugate(m, h));
  std::vector<Disk> disks;
  for (const auto& d : g.disks()) disks.push_back(image(h, d));
  auto conj = assemble_unchecked(gens, disks);
  REQUIRE(conj.classical());
  CHECK(std::abs(delta_of(conj) - d0) < 0.01);

  using K = NielsenMove::Kind;
  for (NielsenMove m : {NielsenMove{K::Invert, 0}, NielsenMove{K::Invert, 1},
                        NielsenMove{K::Swap, 0, 1}, NielsenMove{K::Cycle}}) {
    auto r = nielsen(g, m);
    CHECK(r.report.ok());
    CHECK(r.group.classical());
    CHECK(std::abs(delta_of(r.group) - d0) <= 2e-3);
  }
  auto inv2 = nielsen(nielsen(g, {K::Invert, 0}).group, {K::Invert, 0}).group;
  for (int i = 0; i < 2; ++i) {
    CHECK(projective_distance(inv2.generators()[i], g.generators()[i]) < 1e-15);
  }
  auto sw = nielsen(g, {K::Swap, 0, 1}).group;
  CHECK(projective_distance(sw.generators()[0], g.generators()[1]) == 0.0);
  CHECK(projective_distance(sw.generators()[1], g.generators()[0]) == 0.0);

  auto mul = nielsen(g, {K::Multiply, 0, 1});
  CHECK(!mul.report.ok());
  CHECK(!mul.group.classical());
  CHECK(std::abs(delta_of(mul.group) - d0) <= 2e-3);

  CHECK_THROWS_AS(nielsen(g, {K::Invert, 2}), InvalidParameter);
  CHECK_THROWS_AS(nielsen(g, {K::Multiply, 1, 1}), InvalidParameter);
}
