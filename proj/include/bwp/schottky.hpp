#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "bwp/moebius.hpp"
#include "bwp/parallel.hpp"

namespace bwp {

// Letter of the free group on g generators: values [0, g) stand for the
// generators, [g, 2g) for their inverses.
using Letter = std::uint8_t;

struct FixedPointTriple {
  ComplexPoint attracting;
  ComplexPoint repelling;
  cplx multiplier;
};

struct GeneratorSpec {
  std::variant<MoebiusMap, FixedPointTriple> map;
  // Optional explicit pairing: the generator maps the exterior of `source`
  // onto the interior of `target`. Both or neither must be given.
  std::optional<Disk> source;
  std::optional<Disk> target;
};

struct GroupSpec {
  std::vector<GeneratorSpec> generators;
  // Rank-one group with a fixed point at infinity allowed; defining disks are
  // taken from the fixed-point annulus.
  bool cyclic_diagnostic = false;
};

struct Violation {
  enum class Kind { DisksOverlap, PairingIncorrect, NotLoxodromic, InfinityInsideDisk };
  Kind kind;
  int first = -1;   // letter or generator index
  int second = -1;  // partner index for pairwise conditions
  std::string detail;
};

const char* to_string(Violation::Kind k);

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

class GroupValidationError : public std::runtime_error {
 public:
  explicit GroupValidationError(ValidationReport report);
  const ValidationReport& report() const noexcept { return report_; }

 private:
  ValidationReport report_;
};

// A marked Schottky group: generators g_0..g_{g-1} and one defining disk per
// letter. Generator i maps the exterior of disk(i + g) onto the interior of
// disk(i), so every reduced word starting with letter l maps the common
// exterior into disk(l).
class SchottkyGroup {
 public:
  int rank() const { return static_cast<int>(generators_.size()); }
  int letter_count() const { return 2 * rank(); }
  Letter inverse_letter(Letter l) const {
    return static_cast<Letter>(l < rank() ? l + rank() : l - rank());
  }
  const MoebiusMap& letter_map(Letter l) const { return letter_maps_[l]; }
  const Disk& disk(Letter l) const { return disks_[l]; }
  const std::vector<Disk>& disks() const { return disks_; }
  const std::vector<MoebiusMap>& generators() const { return generators_; }
  // 'a', 'b', ... for generators and 'A', 'B', ... for inverses.
  std::string letter_name(Letter l) const;
  std::string word_name(std::span<const Letter> letters) const;

  bool cyclic_diagnostic() const { return cyclic_; }
  // True when the defining disks satisfy the classical Schottky condition
  // (always the case for groups produced by build()).
  bool classical() const { return classical_; }
  // Infinity, or a point of the fundamental annulus for cyclic groups.
  ComplexPoint default_basepoint() const { return basepoint_; }

  // Composition of letter maps, leftmost letter applied last.
  MoebiusMap word_map(std::span<const Letter> letters) const;
  // Level-n disk of the word: l1..l_{n-1}(disk(l_n)).
  Disk word_disk(std::span<const Letter> letters) const;

 private:
  friend SchottkyGroup build(const GroupSpec& spec);
  friend SchottkyGroup assemble_unchecked(std::vector<MoebiusMap> generators,
                                          std::vector<Disk> disks, bool cyclic);
  std::vector<MoebiusMap> generators_;
  std::vector<MoebiusMap> letter_maps_;
  std::vector<Disk> disks_;
  ComplexPoint basepoint_ = ComplexPoint::infinity();
  bool cyclic_ = false;
  bool classical_ = false;
};

// Builds and validates a group. Without explicit circles each letter's disk
// is the isometric circle of the inverse letter map (center a/c, radius 1/|c|
// for the unit-determinant representative). Throws GroupValidationError with
// the full report on failure.
SchottkyGroup build(const GroupSpec& spec);

// Assembles a marked group without enforcing the classical condition; the
// `classical()` flag records whether validation passed.
SchottkyGroup assemble_unchecked(std::vector<MoebiusMap> generators, std::vector<Disk> disks,
                                 bool cyclic = false);

// Checks disk disjointness, pairing (sampled boundary points, relative
// residual 1e-9, plus exterior-to-interior orientation), loxodromy, and that
// infinity lies in the common exterior.
ValidationReport validate(const SchottkyGroup& group);
ValidationReport validate(const std::vector<MoebiusMap>& generators,
                          const std::vector<Disk>& disks, bool cyclic);

// Isometric-circle disks for a list of generators, in letter order.
std::vector<Disk> isometric_disks(const std::vector<MoebiusMap>& generators);

// Pairing circles for the map sending the exterior of `from` onto the interior
// of `to`: z -> c_to - r_from r_to / (z - c_from).
MoebiusMap circle_pairing(const Disk& from, const Disk& to);

// Genus-2 test group pairing circles at -c, c (generator a) and -ic, ic
// (generator b), all of radius r.
SchottkyGroup standard_test_group(double radius = 0.5, double offset = 2.0);

// Rank zero: the identity alone.
SchottkyGroup trivial_group();

// z -> lambda z with the fixed-point annulus disks (cyclic-diagnostic mode).
SchottkyGroup cyclic_test_group(cplx lambda = 4.0);

struct Word {
  std::vector<Letter> letters;
  MoebiusMap map;
  double basepoint_derivative = 1.0;  // spherical derivative of map at the basepoint
  std::size_t length() const { return letters.size(); }
};

// Visits every reduced word of length <= max_len exactly once, shell by shell,
// lexicographic by letter index within a shell. The Word reference is only
// valid during the callback.
void for_each_word(const SchottkyGroup& group, int max_len, const ComplexPoint& basepoint,
                   const std::function<void(const Word&)>& visit);

// Materialized form of for_each_word, for small depths.
std::vector<Word> enumerate(const SchottkyGroup& group, int max_len);
std::vector<Word> enumerate(const SchottkyGroup& group, int max_len,
                            const ComplexPoint& basepoint);

// 2g (2g - 1)^(n - 1) for n >= 1, 1 for n = 0.
std::uint64_t shell_size(int rank, int n);

// log of the spherical derivative at `basepoint` of every word of length
// exactly `depth`, in enumeration order.
std::vector<double> shell_log_derivatives(const SchottkyGroup& group, int depth,
                                          const ComplexPoint& basepoint,
                                          const ExecPolicy& exec = {});

// P_n(s) = sum_{|w| = n} (spherical derivative of w at basepoint)^s for
// n = 0..max_depth.
std::vector<double> shell_sums(const SchottkyGroup& group, double s, int max_depth,
                               const ComplexPoint& basepoint, const ExecPolicy& exec = {});
inline std::vector<double> shell_sums(const SchottkyGroup& group, double s, int max_depth) {
  return shell_sums(group, s, max_depth, group.default_basepoint());
}

struct LimitSetSample {
  std::vector<ComplexPoint> points;
  int depth = 0;
  // Per point: the seed letter whose attracting fixed point was propagated,
  // and the index of the propagating word within its shell.
  std::vector<Letter> seed_letters;
  std::vector<std::uint32_t> word_indices;
};

// Images of attracting fixed points of the letters l under words w of length
// `depth` with w l reduced.
LimitSetSample limit_set(const SchottkyGroup& group, int depth);

struct Reduction {
  ComplexPoint point;  // w(z), in the closed common exterior
  std::vector<Letter> word;
};

// Moves z into the fundamental domain by repeatedly undoing the letter whose
// disk contains it. Throws NearLimitSet after `max_steps` steps, or once the
// accumulated spherical stretch exceeds `max_expansion` (z then lies within
// rounding distance of the limit set).
Reduction reduce_to_fundamental_domain(const SchottkyGroup& group, const ComplexPoint& z,
                                       int max_steps = 1000, double max_expansion = 1e12);

// Points of the fundamental domain drawn uniformly from [-window, window]^2,
// at least `margin` * radius away from every defining circle.
std::vector<ComplexPoint> fundamental_domain_samples(const SchottkyGroup& group, int count,
                                                     std::uint64_t seed, double window = 4.0,
                                                     double margin = 0.1);

struct NielsenMove {
  enum class Kind { Invert, Swap, Multiply, Cycle };
  Kind kind;
  int i = 0;
  int j = 0;
};

struct NielsenResult {
  SchottkyGroup group;
  ValidationReport report;  // empty when the classical condition survived
};

// Elementary Nielsen move on the marking. Invert/Swap/Cycle permute the
// existing disks; Multiply (g_i <- g_i g_j) recomputes isometric disks for
// the new generator. Throws InvalidParameter for out-of-range indices.
NielsenResult nielsen(const SchottkyGroup& group, const NielsenMove& move);

struct DeltaOptions {
  double resolution = 0.01;
  int max_depth = 12;
  // Allowed deviation of the deepest shell ratios from 1 at the estimate.
  double ratio_tolerance = 0.05;
  std::optional<ComplexPoint> basepoint;
  ExecPolicy exec;
};

struct DeltaEstimate {
  double delta = 0.0;
  double lo = 0.0;
  double hi = 2.0;
  // shell_ratios[n - 1] = P_n(delta) / P_{n-1}(delta), n = 1..max_depth.
  std::vector<double> shell_ratios;
  int max_depth = 0;
  double ratio_tolerance = 0.0;
};

// Critical exponent estimate: bisection over s in [0, 2] for the crossing of
// P_N(s) / P_{N-1}(s) = 1 at the deepest shells. Throws DiagnosticFailure
// with the ratio table when the deep ratios at the estimate are not within
// ratio_tolerance of 1 or the crossing is outside [0, 2].
DeltaEstimate estimate_delta(const SchottkyGroup& group, const DeltaOptions& options = {});

}  // namespace bwp
