#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bwp/moebius.hpp"
#include "bwp/parallel.hpp"
#include "bwp/poincare.hpp"
#include "bwp/schottky.hpp"

namespace bwp::cli {

// Malformed or invalid configuration; maps to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GroupSettings {
  enum class Preset { None, Standard, Cyclic, Trivial };
  Preset preset = Preset::None;
  double radius = 0.5;
  double offset = 2.0;
  cplx multiplier = 4.0;
  GroupSpec spec;
};

struct SeriesSettings {
  std::optional<ComplexPoint> z;
  int max_len = 10;
  double tol = 1e-12;
  bool relative_tol = false;
  WeightMode weight = WeightMode::Holomorphic;
  // Words g for the automorphy test, e.g. "a", "B", "ab". Empty: every
  // generator and inverse.
  std::vector<std::string> words;
  int samples = 5;
  std::uint64_t seed = 1;
};

struct MeasureSettings {
  int depth = 8;
  std::optional<double> delta;  // estimated when absent
  double delta_resolution = 1e-6;
  int conformality_samples = 50;
  std::uint64_t seed = 1;
  std::optional<std::string> input;  // CSV to import instead of building
};

struct LimitSetSettings {
  int depth = 8;
  int width = 512;
  int height = 512;
  double window = 4.0;
  std::string format = "json";
};

struct BersSettings {
  int samples = 10000;
  std::uint64_t seed = 1;
  int measure_depth = 8;
};

struct RunConfig {
  // Canonical dump of the parsed document (hash input).
  std::string canonical = "{}";
  std::optional<GroupSettings> group;
  SeriesSettings series;
  MeasureSettings measure;
  LimitSetSettings limitset;
  BersSettings bers;
  DeltaOptions delta;
  // 0-based internally; the config and flags use 1-based indices.
  std::vector<NielsenMove> nielsen_moves;
};

RunConfig parse_config_text(std::string_view text, const std::string& source);
RunConfig parse_config(const std::string& path);

// Builds the configured group. Throws ConfigError without a group section;
// GroupValidationError propagates with its report.
SchottkyGroup build_group(const RunConfig& config);

// The group as a config "group" section: unit-determinant matrices plus the
// defining circles (omitted in cyclic-diagnostic mode, where they are
// recomputed). Parsing it back rebuilds the same marked group.
nlohmann::ordered_json group_spec_json(const SchottkyGroup& group);

// "re,im", "re" or "inf".
ComplexPoint parse_point(const std::string& text, const std::string& what);
// "invert:1", "swap:1:2", "multiply:1:2", "cycle".
NielsenMove parse_move(const std::string& text, const std::string& what);

std::uint64_t fnv1a(std::string_view bytes);

}  // namespace bwp::cli
