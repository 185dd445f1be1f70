#include "bwp/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "bwp/errors.hpp"
#include "bwp/summation.hpp"

namespace bwp {

namespace {

constexpr double kPairingTolerance = 1e-9;
constexpr double kDisjointTolerance = 1e-12;
constexpr double kReductionSlack = 1e-12;

std::vector<MoebiusMap> letter_maps_of(const std::vector<MoebiusMap>& generators) {
  std::vector<MoebiusMap> maps(generators);
  for (const MoebiusMap& g : generators) maps.push_back(g.inverse());
  return maps;
}

// Conjugacy to w -> multiplier * w: sends repelling -> 0, attracting -> inf.
MoebiusMap normalizing_chart(const FixedPointData& f) {
  if (f.attracting.is_infinite()) return MoebiusMap(1.0, -f.repelling.value(), 0.0, 1.0);
  if (f.repelling.is_infinite()) return MoebiusMap(0.0, 1.0, 1.0, -f.attracting.value());
  return MoebiusMap(1.0, -f.repelling.value(), 1.0, -f.attracting.value());
}

// Disks for the rank-one cyclic group: |w| > sqrt|lambda| around the
// attracting point and |w| < 1/sqrt|lambda| around the repelling point.
std::vector<Disk> annulus_disks(const MoebiusMap& g) {
  const FixedPointData f = fixed_points_multiplier(g);
  const MoebiusMap chart_inv = normalizing_chart(f).inverse();
  const double root = std::sqrt(std::abs(f.multiplier));
  return {image(chart_inv, Disk{0.0, root, true}), image(chart_inv, Disk{0.0, 1.0 / root, false})};
}

ComplexPoint annulus_basepoint(const MoebiusMap& g) {
  const MoebiusMap chart_inv = normalizing_chart(fixed_points_multiplier(g)).inverse();
  const ComplexPoint p = chart_inv.apply(ComplexPoint(1.0));
  return p.is_finite() ? p : chart_inv.apply(ComplexPoint(-1.0));
}

// Nearest point of the disk's boundary circle to z, as a sphere point.
ComplexPoint nearest_on_circle(const Disk& d, const ComplexPoint& z) {
  if (z.is_infinite()) return ComplexPoint(d.center + d.radius);
  const cplx rel = z.value() - d.center;
  const double r = std::abs(rel);
  const cplx dir = r == 0.0 ? cplx(1.0, 0.0) : rel / r;
  return ComplexPoint(d.center + d.radius * dir);
}

// Depth-first traversal of reduced words of length exactly `depth` whose
// first letters equal `prefix`. Calls visit(letters, map) at each leaf.
template <typename Visit>
void visit_subtree(const SchottkyGroup& group, std::span<const Letter> prefix, int depth,
                   Visit&& visit) {
  std::vector<Letter> letters(prefix.begin(), prefix.end());
  if (static_cast<int>(letters.size()) > depth) return;
  std::vector<MoebiusMap> maps(static_cast<std::size_t>(depth) + 1);
  for (std::size_t k = 0; k < letters.size(); ++k) {
    if (k > 0 && letters[k] == group.inverse_letter(letters[k - 1])) return;
    maps[k + 1] = maps[k] * group.letter_map(letters[k]);
  }
  const int letter_count = group.letter_count();
  auto recurse = [&](auto&& self, int level) -> void {
    if (level == depth) {
      visit(std::span<const Letter>(letters), maps[level]);
      return;
    }
    for (int l = 0; l < letter_count; ++l) {
      const auto letter = static_cast<Letter>(l);
      if (level > 0 && letter == group.inverse_letter(letters[level - 1])) continue;
      maps[level + 1] = maps[level] * group.letter_map(letter);
      letters.push_back(letter);
      self(self, level + 1);
      letters.pop_back();
    }
  };
  recurse(recurse, static_cast<int>(letters.size()));
}

// Fixed partition of the word tree into subtrees by their first one or two
// letters, in lexicographic order.
std::vector<std::vector<Letter>> task_prefixes(const SchottkyGroup& group, int depth) {
  std::vector<std::vector<Letter>> out;
  const int n = group.letter_count();
  for (int a = 0; a < n; ++a) {
    if (depth < 2) {
      out.push_back({static_cast<Letter>(a)});
      continue;
    }
    for (int b = 0; b < n; ++b) {
      if (b == group.inverse_letter(static_cast<Letter>(a))) continue;
      out.push_back({static_cast<Letter>(a), static_cast<Letter>(b)});
    }
  }
  return out;
}

}  // namespace

const char* to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::DisksOverlap:
      return "disks overlap";
    case Violation::Kind::PairingIncorrect:
      return "pairing incorrect";
    case Violation::Kind::NotLoxodromic:
      return "not loxodromic";
    case Violation::Kind::InfinityInsideDisk:
      return "infinity inside a defining disk";
  }
  return "?";
}

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << to_string(violations[i].kind) << ": " << violations[i].detail;
  }
  return os.str();
}

GroupValidationError::GroupValidationError(ValidationReport report)
    : std::runtime_error("invalid Schottky group: " + report.summary()),
      report_(std::move(report)) {}

std::string SchottkyGroup::letter_name(Letter l) const {
  const int g = rank();
  const int idx = l < g ? l : l - g;
  if (g <= 26) return std::string(1, static_cast<char>((l < g ? 'a' : 'A') + idx));
  return (l < g ? "g" : "G") + std::to_string(idx);
}

std::string SchottkyGroup::word_name(std::span<const Letter> letters) const {
  if (letters.empty()) return "1";
  std::string out;
  for (Letter l : letters) out += letter_name(l);
  return out;
}

MoebiusMap SchottkyGroup::word_map(std::span<const Letter> letters) const {
  MoebiusMap m;
  for (Letter l : letters) m = m * letter_map(l);
  return m;
}

Disk SchottkyGroup::word_disk(std::span<const Letter> letters) const {
  if (letters.empty()) throw InvalidParameter("word_disk: empty word has no disk");
  return image(word_map(letters.first(letters.size() - 1)), disk(letters.back()));
}

std::vector<Disk> isometric_disks(const std::vector<MoebiusMap>& generators) {
  const std::size_t g = generators.size();
  std::vector<Disk> disks(2 * g);
  for (std::size_t i = 0; i < g; ++i) {
    const MoebiusMap& m = generators[i];
    const double scale = std::abs(m.a()) + std::abs(m.d());
    if (std::abs(m.c()) <= 1e-14 * scale) {
      // Fixes infinity: no isometric circle. Mark with a disk containing
      // infinity so validation reports it.
      disks[i] = Disk{0.0, 0.0, true};
      disks[i + g] = Disk{0.0, 0.0, true};
      continue;
    }
    const double radius = 1.0 / std::abs(m.c());
    disks[i] = Disk{m.a() / m.c(), radius, false};
    disks[i + g] = Disk{-m.d() / m.c(), radius, false};
  }
  return disks;
}

MoebiusMap circle_pairing(const Disk& from, const Disk& to) {
  return MoebiusMap(to.center, -from.radius * to.radius - to.center * from.center, 1.0,
                    -from.center);
}

ValidationReport validate(const std::vector<MoebiusMap>& generators,
                          const std::vector<Disk>& disks, bool cyclic) {
  ValidationReport report;
  const int g = static_cast<int>(generators.size());
  auto add = [&report](Violation::Kind kind, int a, int b, std::string detail) {
    report.violations.push_back({kind, a, b, std::move(detail)});
  };
  if (static_cast<int>(disks.size()) != 2 * g) {
    throw InvalidParameter("validate: need exactly one disk per letter");
  }
  for (int i = 0; i < g; ++i) {
    const MoebiusClass cls = generators[i].classify();
    if (cls != MoebiusClass::Loxodromic) {
      add(Violation::Kind::NotLoxodromic, i, -1,
          "generator " + std::to_string(i) + " is " + to_string(cls));
    }
  }
  if (!cyclic) {
    for (int l = 0; l < 2 * g; ++l) {
      if (disks[l].outer) {
        add(Violation::Kind::InfinityInsideDisk, l, -1,
            "disk " + std::to_string(l) + " contains infinity");
      }
    }
  }
  for (int l = 0; l < 2 * g; ++l) {
    for (int k = l + 1; k < 2 * g; ++k) {
      const Disk& p = disks[l];
      const Disk& q = disks[k];
      const double dist = std::abs(p.center - q.center);
      const double scale = std::max({1.0, p.radius, q.radius});
      bool overlap;
      if (!p.outer && !q.outer) {
        overlap = dist <= p.radius + q.radius + kDisjointTolerance * scale;
      } else if (p.outer && q.outer) {
        overlap = true;
      } else {
        const Disk& in = p.outer ? q : p;
        const Disk& out = p.outer ? p : q;
        overlap = dist + in.radius >= out.radius - kDisjointTolerance * scale;
      }
      if (overlap) {
        add(Violation::Kind::DisksOverlap, l, k,
            "disks " + std::to_string(l) + " and " + std::to_string(k) + " overlap");
      }
    }
  }
  constexpr int kSamples = 16;
  for (int i = 0; i < g; ++i) {
    const MoebiusMap& m = generators[i];
    const Disk& source = disks[i + g];
    const Disk& target = disks[i];
    if (source.radius <= 0.0 || target.radius <= 0.0) continue;
    double worst = 0.0;
    for (int k = 0; k < kSamples; ++k) {
      const double t = 2.0 * std::numbers::pi * (k + 0.5) / kSamples;
      const ComplexPoint p(source.center + source.radius * std::polar(1.0, t));
      const ComplexPoint img = m.apply(p);
      worst = std::max(worst, chordal(img, nearest_on_circle(target, img)));
    }
    const ComplexPoint outside =
        source.outer ? ComplexPoint(source.center) : ComplexPoint::infinity();
    const bool oriented = target.contains(m.apply(outside));
    if (worst >= kPairingTolerance || !oriented) {
      std::ostringstream os;
      os << "generator " << i << " does not map the exterior of disk " << i + g
         << " onto the interior of disk " << i << " (boundary residual " << worst
         << (oriented ? ")" : ", exterior lands outside the target)");
      add(Violation::Kind::PairingIncorrect, i, i + g, os.str());
    }
  }
  return report;
}

ValidationReport validate(const SchottkyGroup& group) {
  return validate(group.generators(), group.disks(), group.cyclic_diagnostic());
}

SchottkyGroup assemble_unchecked(std::vector<MoebiusMap> generators, std::vector<Disk> disks,
                                 bool cyclic) {
  SchottkyGroup group;
  group.letter_maps_ = letter_maps_of(generators);
  group.generators_ = std::move(generators);
  group.disks_ = std::move(disks);
  group.cyclic_ = cyclic;
  group.classical_ = validate(group).ok();
  if (cyclic && group.rank() == 1 &&
      group.generators_[0].classify() == MoebiusClass::Loxodromic) {
    group.basepoint_ = annulus_basepoint(group.generators_[0]);
  }
  return group;
}

SchottkyGroup build(const GroupSpec& spec) {
  const int g = static_cast<int>(spec.generators.size());
  if (g < 1) throw InvalidParameter("build: a Schottky group needs at least one generator");
  if (spec.cyclic_diagnostic && g != 1) {
    throw InvalidParameter("build: cyclic-diagnostic mode requires exactly one generator");
  }
  std::vector<MoebiusMap> generators;
  for (const GeneratorSpec& gs : spec.generators) {
    if (const auto* m = std::get_if<MoebiusMap>(&gs.map)) {
      generators.push_back(*m);
    } else {
      const auto& t = std::get<FixedPointTriple>(gs.map);
      generators.push_back(from_fixed_points_multiplier(t.repelling, t.attracting, t.multiplier));
    }
  }
  const bool any_circles = std::any_of(spec.generators.begin(), spec.generators.end(),
                                       [](const auto& s) { return s.source || s.target; });
  std::vector<Disk> disks;
  if (any_circles) {
    disks.resize(2 * g);
    for (int i = 0; i < g; ++i) {
      const GeneratorSpec& gs = spec.generators[i];
      if (!gs.source || !gs.target) {
        throw InvalidParameter("build: explicit circles must be given for every generator");
      }
      disks[i] = *gs.target;
      disks[i + g] = *gs.source;
    }
  } else if (spec.cyclic_diagnostic) {
    if (generators[0].classify() != MoebiusClass::Loxodromic) {
      ValidationReport report;
      report.violations.push_back({Violation::Kind::NotLoxodromic, 0, -1,
                                   "generator 0 is " +
                                       std::string(to_string(generators[0].classify()))});
      throw GroupValidationError(std::move(report));
    }
    disks = annulus_disks(generators[0]);
  } else {
    disks = isometric_disks(generators);
  }
  ValidationReport report = validate(generators, disks, spec.cyclic_diagnostic);
  if (!report.ok()) throw GroupValidationError(std::move(report));
  return assemble_unchecked(std::move(generators), std::move(disks), spec.cyclic_diagnostic);
}

SchottkyGroup standard_test_group(double radius, double offset) {
  const Disk left{-offset, radius, false}, right{offset, radius, false};
  const Disk down{cplx(0.0, -offset), radius, false}, up{cplx(0.0, offset), radius, false};
  GroupSpec spec;
  spec.generators.push_back({circle_pairing(left, right), left, right});
  spec.generators.push_back({circle_pairing(down, up), down, up});
  return build(spec);
}

SchottkyGroup trivial_group() { return assemble_unchecked({}, {}, false); }

SchottkyGroup cyclic_test_group(cplx lambda) {
  GroupSpec spec;
  spec.cyclic_diagnostic = true;
  spec.generators.push_back({MoebiusMap(std::sqrt(lambda), 0.0, 0.0, 1.0 / std::sqrt(lambda)),
                             std::nullopt, std::nullopt});
  return build(spec);
}

std::uint64_t shell_size(int rank, int n) {
  if (n == 0) return 1;
  std::uint64_t size = 2 * static_cast<std::uint64_t>(rank);
  for (int k = 1; k < n; ++k) size *= 2 * static_cast<std::uint64_t>(rank) - 1;
  return size;
}

void for_each_word(const SchottkyGroup& group, int max_len, const ComplexPoint& basepoint,
                   const std::function<void(const Word&)>& visit) {
  if (max_len < 0) throw InvalidParameter("enumerate: max_len must be >= 0");
  Word word;
  word.basepoint_derivative = 1.0;
  visit(word);
  for (int n = 1; n <= max_len; ++n) {
    visit_subtree(group, {}, n, [&](std::span<const Letter> letters, const MoebiusMap& m) {
      word.letters.assign(letters.begin(), letters.end());
      word.map = m;
      word.basepoint_derivative = m.spherical_derivative(basepoint);
      visit(word);
    });
  }
}

std::vector<Word> enumerate(const SchottkyGroup& group, int max_len,
                            const ComplexPoint& basepoint) {
  std::vector<Word> out;
  for_each_word(group, max_len, basepoint, [&out](const Word& w) { out.push_back(w); });
  return out;
}

std::vector<Word> enumerate(const SchottkyGroup& group, int max_len) {
  return enumerate(group, max_len, group.default_basepoint());
}

std::vector<double> shell_log_derivatives(const SchottkyGroup& group, int depth,
                                          const ComplexPoint& basepoint,
                                          const ExecPolicy& exec) {
  if (depth < 0) throw InvalidParameter("shell_log_derivatives: depth must be >= 0");
  if (depth == 0) return {0.0};
  const auto prefixes = task_prefixes(group, depth);
  std::vector<std::vector<double>> parts(prefixes.size());
  parallel_for(prefixes.size(), exec.threads, [&](std::size_t t) {
    std::vector<double>& out = parts[t];
    visit_subtree(group, prefixes[t], depth, [&](std::span<const Letter>, const MoebiusMap& m) {
      out.push_back(std::log(m.spherical_derivative(basepoint)));
    });
  });
  std::vector<double> all;
  all.reserve(shell_size(group.rank(), depth));
  for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
  return all;
}

std::vector<double> shell_sums(const SchottkyGroup& group, double s, int max_depth,
                               const ComplexPoint& basepoint, const ExecPolicy& exec) {
  if (max_depth < 0) throw InvalidParameter("shell_sums: max_depth must be >= 0");
  if (!(s >= 0.0)) throw InvalidParameter("shell_sums: exponent must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(max_depth) + 1, 0.0);
  out[0] = 1.0;
  if (max_depth == 0) return out;
  const int n = group.letter_count();
  // One task per first letter; each walks its subtree once, accumulating
  // every depth on the way down.
  std::vector<std::vector<CompensatedSum>> strict(n);
  std::vector<std::vector<double>> fast(n);
  parallel_for(static_cast<std::size_t>(n), exec.threads, [&](std::size_t t) {
    auto& acc = strict[t];
    auto& plain = fast[t];
    acc.assign(out.size(), {});
    plain.assign(out.size(), 0.0);
    std::vector<Letter> letters{static_cast<Letter>(t)};
    std::vector<MoebiusMap> maps(out.size());
    maps[1] = group.letter_map(static_cast<Letter>(t));
    auto record = [&](int level) {
      const double v = s == 0.0 ? 1.0 : std::pow(maps[level].spherical_derivative(basepoint), s);
      if (exec.mode == ExecMode::Strict) {
        acc[level].add(v);
      } else {
        plain[level] += v;
      }
    };
    auto recurse = [&](auto&& self, int level) -> void {
      record(level);
      if (level == max_depth) return;
      for (int l = 0; l < n; ++l) {
        const auto letter = static_cast<Letter>(l);
        if (letter == group.inverse_letter(letters.back())) continue;
        maps[level + 1] = maps[level] * group.letter_map(letter);
        letters.push_back(letter);
        self(self, level + 1);
        letters.pop_back();
      }
    };
    recurse(recurse, 1);
  });
  for (std::size_t depth = 1; depth < out.size(); ++depth) {
    CompensatedSum total;
    double plain_total = 0.0;
    for (int t = 0; t < n; ++t) {
      total.add(strict[t][depth]);
      plain_total += fast[t][depth];
    }
    out[depth] = exec.mode == ExecMode::Strict ? total.value() : plain_total;
  }
  return out;
}

LimitSetSample limit_set(const SchottkyGroup& group, int depth) {
  if (depth < 1) throw InvalidParameter("limit_set: depth must be >= 1");
  const int n = group.letter_count();
  std::vector<ComplexPoint> seeds;
  for (int l = 0; l < n; ++l) {
    seeds.push_back(fixed_points_multiplier(group.letter_map(static_cast<Letter>(l))).attracting);
  }
  LimitSetSample sample;
  sample.depth = depth;
  std::uint32_t index = 0;
  visit_subtree(group, {}, depth, [&](std::span<const Letter> letters, const MoebiusMap& m) {
    const Letter last = letters.back();
    for (int l = 0; l < n; ++l) {
      if (l == group.inverse_letter(last)) continue;
      sample.points.push_back(m.apply(seeds[l]));
      sample.seed_letters.push_back(static_cast<Letter>(l));
      sample.word_indices.push_back(index);
    }
    ++index;
  });
  return sample;
}

Reduction reduce_to_fundamental_domain(const SchottkyGroup& group, const ComplexPoint& z,
                                       int max_steps, double max_expansion) {
  Reduction out{z, {}};
  std::vector<Letter> applied;  // in application order
  // Stretch of the reduction map at z. Rounding in z is amplified by the same
  // factor, so past max_expansion the result is noise.
  double log_stretch = 0.0;
  const double log_cap = std::log(max_expansion);
  for (int step = 0;; ++step) {
    int inside = -1;
    for (int l = 0; l < group.letter_count(); ++l) {
      if (group.disk(static_cast<Letter>(l)).contains(out.point, kReductionSlack)) {
        inside = l;
        break;
      }
    }
    if (inside < 0) break;
    if (step >= max_steps || log_stretch > log_cap) {
      throw NearLimitSet("point numerically indistinguishable from limit set");
    }
    const Letter undo = group.inverse_letter(static_cast<Letter>(inside));
    const MoebiusMap& m = group.letter_map(undo);
    log_stretch += std::log(m.spherical_derivative(out.point));
    out.point = m.apply(out.point);
    applied.push_back(undo);
  }
  out.word.assign(applied.rbegin(), applied.rend());
  return out;
}

NielsenResult nielsen(const SchottkyGroup& group, const NielsenMove& move) {
  const int g = group.rank();
  auto check = [g](int k) {
    if (k < 0 || k >= g) throw InvalidParameter("nielsen: generator index out of range");
  };
  std::vector<MoebiusMap> gens = group.generators();
  std::vector<Disk> disks = group.disks();
  switch (move.kind) {
    case NielsenMove::Kind::Invert:
      check(move.i);
      gens[move.i] = gens[move.i].inverse();
      std::swap(disks[move.i], disks[move.i + g]);
      break;
    case NielsenMove::Kind::Swap:
      check(move.i);
      check(move.j);
      std::swap(gens[move.i], gens[move.j]);
      std::swap(disks[move.i], disks[move.j]);
      std::swap(disks[move.i + g], disks[move.j + g]);
      break;
    case NielsenMove::Kind::Multiply: {
      check(move.i);
      check(move.j);
      if (move.i == move.j) throw InvalidParameter("nielsen: multiply needs distinct indices");
      gens[move.i] = gens[move.i] * gens[move.j];
      const std::vector<Disk> iso = isometric_disks({gens[move.i]});
      disks[move.i] = iso[0];
      disks[move.i + g] = iso[1];
      break;
    }
    case NielsenMove::Kind::Cycle:
      std::rotate(gens.begin(), gens.begin() + 1, gens.end());
      std::rotate(disks.begin(), disks.begin() + 1, disks.begin() + g);
      std::rotate(disks.begin() + g, disks.begin() + g + 1, disks.end());
      break;
  }
  ValidationReport report = validate(gens, disks, group.cyclic_diagnostic());
  return {assemble_unchecked(std::move(gens), std::move(disks), group.cyclic_diagnostic()),
          std::move(report)};
}

DeltaEstimate estimate_delta(const SchottkyGroup& group, const DeltaOptions& options) {
  if (!(options.resolution > 0.0)) {
    throw InvalidParameter("estimate_delta: resolution must be positive");
  }
  if (options.max_depth < 3) throw InvalidParameter("estimate_delta: max_depth must be >= 3");
  const ComplexPoint base = options.basepoint.value_or(group.default_basepoint());
  const int N = options.max_depth;
  const std::vector<double> deep = shell_log_derivatives(group, N, base, options.exec);
  const std::vector<double> prev = shell_log_derivatives(group, N - 1, base, options.exec);
  auto mass = [](const std::vector<double>& logs, double s) {
    CompensatedSum sum;
    for (double l : logs) sum.add(std::exp(s * l));
    return sum.value();
  };
  auto ratio = [&](double s) { return mass(deep, s) / mass(prev, s); };

  DeltaEstimate est;
  est.max_depth = N;
  est.ratio_tolerance = options.ratio_tolerance;
  est.lo = 0.0;
  est.hi = 2.0;
  auto table = [&](double s) {
    const std::vector<double> sums = shell_sums(group, s, N, base, options.exec);
    std::vector<double> ratios;
    for (int n = 1; n <= N; ++n) ratios.push_back(sums[n] / sums[n - 1]);
    return ratios;
  };
  auto format_table = [](const std::vector<double>& ratios) {
    std::ostringstream os;
    os.precision(10);
    for (std::size_t n = 0; n < ratios.size(); ++n) {
      os << "n=" << n + 1 << " ratio=" << ratios[n] << "\n";
    }
    return os.str();
  };
  if (ratio(est.hi) >= 1.0) {
    throw DiagnosticFailure("estimate_delta: shell ratio still >= 1 at s = 2",
                            format_table(table(est.hi)));
  }
  while (est.hi - est.lo > options.resolution) {
    const double mid = 0.5 * (est.lo + est.hi);
    if (ratio(mid) >= 1.0) {
      est.lo = mid;
    } else {
      est.hi = mid;
    }
  }
  est.delta = 0.5 * (est.lo + est.hi);
  est.shell_ratios = table(est.delta);
  for (int n = std::max(1, N - 2); n <= N; ++n) {
    if (std::abs(est.shell_ratios[n - 1] - 1.0) > options.ratio_tolerance) {
      throw DiagnosticFailure(
          "estimate_delta: non-geometric shell behaviour (deep ratios not within tolerance of 1)",
          format_table(est.shell_ratios));
    }
  }
  return est;
}

std::vector<ComplexPoint> fundamental_domain_samples(const SchottkyGroup& group, int count,
                                                     std::uint64_t seed, double window,
                                                     double margin) {
  if (count < 0 || !(window > 0.0)) throw InvalidParameter("fundamental_domain_samples: bad range");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(-window, window);
  std::vector<ComplexPoint> out;
  std::int64_t attempts = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++attempts > 1000 * static_cast<std::int64_t>(count)) {
      throw DiagnosticFailure("fundamental_domain_samples: window misses the fundamental domain",
                              "window=" + std::to_string(window));
    }
    const double x = coord(rng);
    const double y = coord(rng);
    const ComplexPoint z(cplx(x, y));
    const bool clear = std::all_of(group.disks().begin(), group.disks().end(), [&](const Disk& d) {
      return d.boundary_offset(z) >= margin * d.radius;
    });
    if (clear) out.push_back(z);
  }
  return out;
}

}  // namespace bwp
