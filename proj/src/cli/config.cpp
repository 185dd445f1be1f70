#include "bwp/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "bwp/errors.hpp"

namespace bwp::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ConfigError(path + ": " + msg);
}

void check_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* k) { return item.key() == k; })) {
      fail(path, "unknown key \"" + item.key() + "\"");
    }
  }
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail(path, "must be finite");
  return x;
}

int integer(const json& v, const std::string& path, int lo, int hi) {
  if (!v.is_number_integer()) fail(path, "expected an integer");
  const auto x = v.get<long long>();
  if (x < lo || x > hi) {
    fail(path, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "] (got " +
                   std::to_string(x) + ")");
  }
  return static_cast<int>(x);
}

std::uint64_t seed_value(const json& v, const std::string& path) {
  if (!v.is_number_unsigned()) fail(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) fail(path, "must be positive");
  return x;
}

cplx complex_value(const json& v, const std::string& path) {
  if (v.is_number()) return number(v, path);
  if (v.is_array() && v.size() == 2) {
    return {number(v[0], path + "[0]"), number(v[1], path + "[1]")};
  }
  fail(path, "expected a number or a [re, im] pair");
}

ComplexPoint point_value(const json& v, const std::string& path) {
  if (v.is_string()) {
    if (v.get<std::string>() == "inf") return ComplexPoint::infinity();
    fail(path, "the only string allowed for a point is \"inf\"");
  }
  return complex_value(v, path);
}

Disk circle_value(const json& v, const std::string& path) {
  check_keys(v, path, {"center", "radius"});
  if (!v.contains("center") || !v.contains("radius")) fail(path, "needs center and radius");
  return {complex_value(v.at("center"), path + ".center"), positive(v.at("radius"), path + ".radius"),
          false};
}

GeneratorSpec generator_value(const json& v, const std::string& path) {
  check_keys(v, path,
             {"matrix", "attracting", "repelling", "multiplier", "source_circle", "target_circle"});
  GeneratorSpec gs;
  const bool has_matrix = v.contains("matrix");
  const bool has_triple = v.contains("attracting") || v.contains("repelling") ||
                          v.contains("multiplier");
  if (has_matrix == has_triple) fail(path, "give either \"matrix\" or the fixed-point triple");
  if (has_matrix) {
    const json& m = v.at("matrix");
    if (!m.is_array() || m.size() != 4) fail(path + ".matrix", "expected [a, b, c, d]");
    cplx e[4];
    for (int k = 0; k < 4; ++k) e[k] = complex_value(m[k], path + ".matrix[" + std::to_string(k) + "]");
    try {
      gs.map = MoebiusMap(e[0], e[1], e[2], e[3]);
    } catch (const std::exception& ex) {
      fail(path + ".matrix", ex.what());
    }
  } else {
    for (const char* k : {"attracting", "repelling", "multiplier"}) {
      if (!v.contains(k)) fail(path, std::string("missing \"") + k + "\"");
    }
    FixedPointTriple t{point_value(v.at("attracting"), path + ".attracting"),
                       point_value(v.at("repelling"), path + ".repelling"),
                       complex_value(v.at("multiplier"), path + ".multiplier")};
    if (!(std::abs(t.multiplier) > 1.0)) {
      std::ostringstream os;
      os << "|multiplier| must be > 1 (got " << std::abs(t.multiplier) << ")";
      fail(path + ".multiplier", os.str());
    }
    if (t.attracting == t.repelling) fail(path, "attracting and repelling points coincide");
    gs.map = t;
  }
  if (v.contains("source_circle") != v.contains("target_circle")) {
    fail(path, "source_circle and target_circle must be given together");
  }
  if (v.contains("source_circle")) {
    gs.source = circle_value(v.at("source_circle"), path + ".source_circle");
    gs.target = circle_value(v.at("target_circle"), path + ".target_circle");
  }
  return gs;
}

GroupSettings group_value(const json& v, const std::string& path) {
  check_keys(v, path, {"preset", "radius", "offset", "multiplier", "generators", "cyclic_diagnostic"});
  GroupSettings g;
  if (v.contains("preset")) {
    if (!v.at("preset").is_string()) fail(path + ".preset", "expected a string");
    const std::string p = v.at("preset").get<std::string>();
    if (p == "standard") {
      g.preset = GroupSettings::Preset::Standard;
    } else if (p == "cyclic") {
      g.preset = GroupSettings::Preset::Cyclic;
    } else if (p == "trivial") {
      g.preset = GroupSettings::Preset::Trivial;
    } else {
      fail(path + ".preset", "expected \"standard\", \"cyclic\" or \"trivial\"");
    }
    if (v.contains("generators")) fail(path, "\"preset\" and \"generators\" are exclusive");
  }
  if (v.contains("radius")) g.radius = positive(v.at("radius"), path + ".radius");
  if (v.contains("offset")) g.offset = positive(v.at("offset"), path + ".offset");
  if (v.contains("multiplier")) {
    g.multiplier = complex_value(v.at("multiplier"), path + ".multiplier");
    if (!(std::abs(g.multiplier) > 1.0)) fail(path + ".multiplier", "|multiplier| must be > 1");
  }
  if (v.contains("cyclic_diagnostic")) {
    if (!v.at("cyclic_diagnostic").is_boolean()) fail(path + ".cyclic_diagnostic", "expected a boolean");
    g.spec.cyclic_diagnostic = v.at("cyclic_diagnostic").get<bool>();
  }
  if (v.contains("generators")) {
    const json& gens = v.at("generators");
    if (!gens.is_array()) fail(path + ".generators", "expected an array");
    for (std::size_t i = 0; i < gens.size(); ++i) {
      g.spec.generators.push_back(
          generator_value(gens[i], path + ".generators[" + std::to_string(i) + "]"));
    }
    if (gens.empty()) g.preset = GroupSettings::Preset::Trivial;
  } else if (g.preset == GroupSettings::Preset::None) {
    fail(path, "needs \"preset\" or \"generators\"");
  }
  return g;
}

WeightMode weight_value(const std::string& s, const std::string& path) {
  if (s == "holomorphic") return WeightMode::Holomorphic;
  if (s == "absolute") return WeightMode::Absolute;
  fail(path, "expected \"holomorphic\" or \"absolute\"");
}

void series_value(const json& v, const std::string& path, SeriesSettings& s) {
  check_keys(v, path, {"z", "max_len", "tol", "relative_tol", "weight", "words", "samples", "seed"});
  if (v.contains("z")) s.z = point_value(v.at("z"), path + ".z");
  if (v.contains("max_len")) s.max_len = integer(v.at("max_len"), path + ".max_len", 0, 16);
  if (v.contains("tol")) s.tol = positive(v.at("tol"), path + ".tol");
  if (v.contains("relative_tol")) {
    if (!v.at("relative_tol").is_boolean()) fail(path + ".relative_tol", "expected a boolean");
    s.relative_tol = v.at("relative_tol").get<bool>();
  }
  if (v.contains("weight")) {
    if (!v.at("weight").is_string()) fail(path + ".weight", "expected a string");
    s.weight = weight_value(v.at("weight").get<std::string>(), path + ".weight");
  }
  if (v.contains("words")) {
    const json& w = v.at("words");
    if (!w.is_array()) fail(path + ".words", "expected an array of strings");
    for (const json& x : w) {
      if (!x.is_string() || x.get<std::string>().empty()) fail(path + ".words", "expected non-empty strings");
      s.words.push_back(x.get<std::string>());
    }
  }
  if (v.contains("samples")) s.samples = integer(v.at("samples"), path + ".samples", 1, 100000);
  if (v.contains("seed")) s.seed = seed_value(v.at("seed"), path + ".seed");
}

void measure_value(const json& v, const std::string& path, MeasureSettings& m) {
  check_keys(v, path, {"depth", "delta", "delta_resolution", "conformality_samples", "seed", "input"});
  if (v.contains("depth")) m.depth = integer(v.at("depth"), path + ".depth", 2, 16);
  if (v.contains("delta")) {
    const double d = number(v.at("delta"), path + ".delta");
    if (d < 0.0 || d > 2.0) fail(path + ".delta", "must be in [0, 2]");
    m.delta = d;
  }
  if (v.contains("delta_resolution")) {
    m.delta_resolution = positive(v.at("delta_resolution"), path + ".delta_resolution");
  }
  if (v.contains("conformality_samples")) {
    m.conformality_samples =
        integer(v.at("conformality_samples"), path + ".conformality_samples", 1, 100000);
  }
  if (v.contains("seed")) m.seed = seed_value(v.at("seed"), path + ".seed");
  if (v.contains("input")) {
    if (!v.at("input").is_string()) fail(path + ".input", "expected a path string");
    m.input = v.at("input").get<std::string>();
  }
}

void limitset_value(const json& v, const std::string& path, LimitSetSettings& l) {
  check_keys(v, path, {"depth", "width", "height", "window", "format"});
  if (v.contains("depth")) l.depth = integer(v.at("depth"), path + ".depth", 1, 14);
  if (v.contains("width")) l.width = integer(v.at("width"), path + ".width", 1, 8192);
  if (v.contains("height")) l.height = integer(v.at("height"), path + ".height", 1, 8192);
  if (v.contains("window")) l.window = positive(v.at("window"), path + ".window");
  if (v.contains("format")) {
    const json& f = v.at("format");
    if (!f.is_string() || (f != "json" && f != "ppm")) fail(path + ".format", "expected \"json\" or \"ppm\"");
    l.format = f.get<std::string>();
  }
}

void bers_value(const json& v, const std::string& path, BersSettings& b) {
  check_keys(v, path, {"samples", "seed", "measure_depth"});
  if (v.contains("samples")) b.samples = integer(v.at("samples"), path + ".samples", 1000, 100000000);
  if (v.contains("seed")) b.seed = seed_value(v.at("seed"), path + ".seed");
  if (v.contains("measure_depth")) {
    b.measure_depth = integer(v.at("measure_depth"), path + ".measure_depth", 2, 14);
  }
}

void delta_value(const json& v, const std::string& path, DeltaOptions& d) {
  check_keys(v, path, {"resolution", "max_depth", "ratio_tolerance", "basepoint"});
  if (v.contains("resolution")) d.resolution = positive(v.at("resolution"), path + ".resolution");
  if (v.contains("max_depth")) d.max_depth = integer(v.at("max_depth"), path + ".max_depth", 3, 16);
  if (v.contains("ratio_tolerance")) {
    d.ratio_tolerance = positive(v.at("ratio_tolerance"), path + ".ratio_tolerance");
  }
  if (v.contains("basepoint")) d.basepoint = point_value(v.at("basepoint"), path + ".basepoint");
}

void nielsen_value(const json& v, const std::string& path, std::vector<NielsenMove>& moves) {
  check_keys(v, path, {"moves"});
  if (!v.contains("moves")) return;
  const json& list = v.at("moves");
  if (!list.is_array()) fail(path + ".moves", "expected an array");
  for (std::size_t k = 0; k < list.size(); ++k) {
    const std::string p = path + ".moves[" + std::to_string(k) + "]";
    if (!list[k].is_string()) fail(p, "expected a move string such as \"multiply:1:2\"");
    moves.push_back(parse_move(list[k].get<std::string>(), p));
  }
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

RunConfig parse_config_text(std::string_view text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(source + ":" + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  RunConfig cfg;
  check_keys(doc, "config", {"group", "series", "measure", "limitset", "bers", "delta", "nielsen"});
  cfg.canonical = doc.dump();
  if (doc.contains("group")) cfg.group = group_value(doc.at("group"), "group");
  if (doc.contains("series")) series_value(doc.at("series"), "series", cfg.series);
  if (doc.contains("measure")) measure_value(doc.at("measure"), "measure", cfg.measure);
  if (doc.contains("limitset")) limitset_value(doc.at("limitset"), "limitset", cfg.limitset);
  if (doc.contains("bers")) bers_value(doc.at("bers"), "bers", cfg.bers);
  if (doc.contains("delta")) delta_value(doc.at("delta"), "delta", cfg.delta);
  if (doc.contains("nielsen")) nielsen_value(doc.at("nielsen"), "nielsen", cfg.nielsen_moves);
  return cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

SchottkyGroup build_group(const RunConfig& config) {
  if (!config.group) throw ConfigError("config: this command needs a \"group\" section");
  const GroupSettings& g = *config.group;
  try {
    switch (g.preset) {
      case GroupSettings::Preset::Standard:
        return standard_test_group(g.radius, g.offset);
      case GroupSettings::Preset::Cyclic:
        return cyclic_test_group(g.multiplier);
      case GroupSettings::Preset::Trivial:
        return trivial_group();
      case GroupSettings::Preset::None:
        break;
    }
    return build(g.spec);
  } catch (const InvalidParameter& e) {
    throw ConfigError(std::string("group: ") + e.what());
  }
}

nlohmann::ordered_json group_spec_json(const SchottkyGroup& group) {
  using nlohmann::ordered_json;
  auto c = [](cplx z) { return ordered_json::array({z.real(), z.imag()}); };
  auto circle = [&](const Disk& d) {
    ordered_json j;
    j["center"] = c(d.center);
    j["radius"] = d.radius;
    return j;
  };
  ordered_json gens = ordered_json::array();
  const int g = group.rank();
  for (int i = 0; i < g; ++i) {
    const MoebiusMap& m = group.generators()[i];
    ordered_json j;
    j["matrix"] = ordered_json::array({c(m.a()), c(m.b()), c(m.c()), c(m.d())});
    if (!group.cyclic_diagnostic()) {
      j["source_circle"] = circle(group.disk(static_cast<Letter>(i + g)));
      j["target_circle"] = circle(group.disk(static_cast<Letter>(i)));
    }
    gens.push_back(j);
  }
  ordered_json out;
  out["generators"] = gens;
  if (group.cyclic_diagnostic()) out["cyclic_diagnostic"] = true;
  return out;
}

ComplexPoint parse_point(const std::string& text, const std::string& what) {
  if (text == "inf") return ComplexPoint::infinity();
  std::vector<double> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw ConfigError(what + ": cannot parse \"" + text + "\" as re,im");
    }
    parts.push_back(v);
  }
  if (parts.empty() || parts.size() > 2) throw ConfigError(what + ": expected re,im or inf");
  return cplx(parts[0], parts.size() == 2 ? parts[1] : 0.0);
}

NielsenMove parse_move(const std::string& text, const std::string& what) {
  std::vector<std::string> f;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) f.push_back(item);
  auto index = [&](std::size_t k) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(f.at(k), &used);
      if (used != f[k].size() || v < 1) throw std::invalid_argument("range");
      return v - 1;
    } catch (const std::exception&) {
      throw ConfigError(what + ": bad generator index in \"" + text + "\" (indices are 1-based)");
    }
  };
  if (f.empty()) throw ConfigError(what + ": empty move");
  if (f[0] == "invert" && f.size() == 2) return {NielsenMove::Kind::Invert, index(1), 0};
  if (f[0] == "swap" && f.size() == 3) return {NielsenMove::Kind::Swap, index(1), index(2)};
  if (f[0] == "multiply" && f.size() == 3) return {NielsenMove::Kind::Multiply, index(1), index(2)};
  if (f[0] == "cycle" && f.size() == 1) return {NielsenMove::Kind::Cycle, 0, 0};
  throw ConfigError(what + ": unknown move \"" + text +
                    "\" (expected invert:i, swap:i:j, multiply:i:j or cycle)");
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace bwp::cli
