#include "bwp/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "bwp/cli/config.hpp"
#include "bwp/cli/emit.hpp"
#include "bwp/elliptic.hpp"
#include "bwp/errors.hpp"
#include "bwp/poincare.hpp"
#include "bwp/polylog.hpp"
#include "bwp/psmeasure.hpp"
#include "bwp/schottky.hpp"

namespace bwp::cli {

namespace {

// Raised by a command that produced a report but must exit non-zero.
struct ExitWith {
  int code;
};

struct Flags {
  std::string config;
  std::string out;
  std::optional<double> tol;
  std::optional<int> max_len;
  std::optional<int> depth;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> weight;
  unsigned threads = 1;
  bool strict = false;
  bool fast = false;

  // polylog / elliptic
  bool bloch_wigner = false;
  std::optional<int> li;
  std::optional<int> ramakrishnan;
  std::string odd_correction = "twice-factorial";
  std::optional<std::string> z;
  std::optional<std::string> q;

  // group / measure / series / bers
  std::optional<std::string> format;
  std::optional<int> width;
  std::optional<int> height;
  std::optional<double> window;
  std::vector<std::string> moves;
  std::optional<double> delta;
  std::optional<std::string> input;
  std::vector<std::string> words;
  std::optional<int> samples;
};

struct Context {
  Flags flags;
  RunConfig config;
  std::uint64_t hash = 0;
  ExecPolicy exec;
};

double tol_of(const Context& c, double fallback) { return c.flags.tol.value_or(fallback); }

ComplexPoint flag_point(const std::optional<std::string>& s, const std::string& name) {
  if (!s) throw ConfigError("--" + name + " is required");
  return parse_point(*s, "--" + name);
}

void emit(const Context& c, const std::string& command, ordered_json results,
          ordered_json diagnostics = {}) {
  write_json(c.flags.out, make_report(command, c.hash, std::move(results), std::move(diagnostics)));
}

// Word names such as "aB" to letters; "e" is the identity.
std::vector<Letter> parse_word(const SchottkyGroup& group, const std::string& name) {
  std::vector<Letter> letters;
  if (name == "e") return letters;
  for (char ch : name) {
    int l = -1;
    if (ch >= 'a' && ch - 'a' < group.rank()) l = ch - 'a';
    if (ch >= 'A' && ch - 'A' < group.rank()) l = ch - 'A' + group.rank();
    if (l < 0) throw ConfigError("word \"" + name + "\": unknown letter '" + std::string(1, ch) + "'");
    if (!letters.empty() && group.inverse_letter(letters.back()) == l) {
      throw ConfigError("word \"" + name + "\" is not reduced");
    }
    letters.push_back(static_cast<Letter>(l));
  }
  return letters;
}

ordered_json delta_json(const DeltaEstimate& d) {
  ordered_json j;
  j["delta"] = num(d.delta);
  j["bracket"] = ordered_json::array({num(d.lo), num(d.hi)});
  j["max_depth"] = d.max_depth;
  j["ratio_tolerance"] = num(d.ratio_tolerance);
  j["shell_ratios"] = to_json(d.shell_ratios);
  return j;
}

ordered_json violations_json(const ValidationReport& r) {
  ordered_json a = ordered_json::array();
  for (const Violation& v : r.violations) {
    ordered_json j;
    j["kind"] = to_string(v.kind);
    j["first"] = v.first;
    j["second"] = v.second;
    j["detail"] = v.detail;
    a.push_back(j);
  }
  return a;
}

ordered_json group_json(const SchottkyGroup& g) {
  ordered_json j;
  j["rank"] = g.rank();
  j["classical"] = g.classical();
  j["cyclic_diagnostic"] = g.cyclic_diagnostic();
  ordered_json gens = ordered_json::array();
  for (const MoebiusMap& m : g.generators()) {
    gens.push_back(ordered_json::array({to_json(m.a()), to_json(m.b()), to_json(m.c()), to_json(m.d())}));
  }
  j["generators"] = gens;
  ordered_json disks = ordered_json::array();
  for (int l = 0; l < g.letter_count(); ++l) {
    ordered_json d = to_json(g.disk(static_cast<Letter>(l)));
    d["letter"] = g.letter_name(static_cast<Letter>(l));
    disks.push_back(d);
  }
  j["disks"] = disks;
  return j;
}

DeltaOptions delta_options(const Context& c) {
  DeltaOptions d = c.config.delta;
  d.exec = c.exec;
  return d;
}

double measure_delta(const Context& c, const SchottkyGroup& group) {
  if (c.flags.delta) return *c.flags.delta;
  if (c.config.measure.delta) return *c.config.measure.delta;
  DeltaOptions d = delta_options(c);
  d.resolution = c.config.measure.delta_resolution;
  return estimate_delta(group, d).delta;
}

// ---- commands ---------------------------------------------------------------

void cmd_polylog(const Context& c) {
  const ComplexPoint z = flag_point(c.flags.z, "z");
  const double tol = tol_of(c, 1e-12);
  ordered_json r;
  r["z"] = to_json(z);
  const int picked = int(c.flags.bloch_wigner) + int(c.flags.li.has_value()) +
                     int(c.flags.ramakrishnan.has_value());
  if (picked != 1) throw ConfigError("polylog: give exactly one of --bloch-wigner, --li, --ramakrishnan");
  if (c.flags.bloch_wigner) {
    const PolylogResult<double> d = bloch_wigner_result(z);
    r["function"] = "bloch_wigner";
    r["value"] = num(d.value);
    r["error_bound"] = num(d.error_bound);
    r["terms_used"] = d.terms_used;
  } else if (c.flags.li) {
    const PolylogResult<cplx> v = li(*c.flags.li, z, tol);
    r["function"] = "li";
    r["n"] = *c.flags.li;
    r["value"] = to_json(v.value);
    r["error_bound"] = num(v.error_bound);
    r["terms_used"] = v.terms_used;
  } else {
    OddCorrection odd = OddCorrection::TwiceFactorial;
    if (c.flags.odd_correction == "factorial-of-2m") {
      odd = OddCorrection::FactorialOfTwiceM;
    } else if (c.flags.odd_correction != "twice-factorial") {
      throw ConfigError("--odd-correction: expected twice-factorial or factorial-of-2m");
    }
    const PolylogResult<double> v = ramakrishnan_D(*c.flags.ramakrishnan, z, tol, odd);
    r["function"] = "ramakrishnan_D";
    r["m"] = *c.flags.ramakrishnan;
    r["odd_correction"] = c.flags.odd_correction;
    r["value"] = num(v.value);
    r["error_bound"] = num(v.error_bound);
    r["terms_used"] = v.terms_used;
  }
  emit(c, "polylog", r);
}

void cmd_elliptic(const Context& c) {
  const ComplexPoint q = flag_point(c.flags.q, "q");
  if (q.is_infinite()) throw ConfigError("--q must be finite");
  EllipticParams p{q.value(), flag_point(c.flags.z, "z"), tol_of(c, 1e-12)};
  const PolylogResult<double> v = elliptic_d2(p);
  ordered_json r;
  r["q"] = to_json(p.q);
  r["x"] = to_json(p.x);
  r["tol"] = num(p.tol);
  r["value"] = num(v.value);
  r["error_bound"] = num(v.error_bound);
  r["terms_used"] = v.terms_used;
  emit(c, "elliptic", r);
}

void cmd_group_validate(const Context& c) {
  try {
    const SchottkyGroup g = build_group(c.config);
    ordered_json r = group_json(g);
    r["ok"] = true;
    r["violations"] = ordered_json::array();
    r["spec"] = group_spec_json(g);
    emit(c, "group validate", r);
  } catch (const GroupValidationError& e) {
    ordered_json r;
    r["ok"] = false;
    r["violations"] = violations_json(e.report());
    emit(c, "group validate", r);
    std::cerr << "invalid group: " << e.report().summary() << "\n";
    throw ExitWith{kExitConfig};
  }
}

void cmd_group_limitset(const Context& c) {
  const SchottkyGroup g = build_group(c.config);
  LimitSetSettings s = c.config.limitset;
  if (c.flags.depth) s.depth = *c.flags.depth;
  if (c.flags.format) s.format = *c.flags.format;
  if (c.flags.width) s.width = *c.flags.width;
  if (c.flags.height) s.height = *c.flags.height;
  if (c.flags.window) s.window = *c.flags.window;
  if (s.format != "json" && s.format != "ppm") throw ConfigError("--format: expected json or ppm");
  if (s.depth < 1 || s.width < 1 || s.height < 1 || !(s.window > 0.0)) {
    throw ConfigError("limitset: depth, width, height and window must be positive");
  }
  const LimitSetSample sample = limit_set(g, s.depth);
  ordered_json r;
  r["depth"] = s.depth;
  r["points"] = sample.points.size();
  if (s.format == "ppm") {
    if (c.flags.out.empty()) throw ConfigError("--out is required for --format ppm");
    Image img(s.width, s.height);
    int drawn = 0;
    for (const ComplexPoint& p : sample.points) {
      if (p.is_infinite()) continue;
      const cplx w = p.value();
      const double fx = (w.real() + s.window) / (2.0 * s.window) * s.width;
      const double fy = (s.window - w.imag()) / (2.0 * s.window) * s.height;
      if (fx < 0 || fy < 0 || fx >= s.width || fy >= s.height) continue;
      img.set(static_cast<int>(fx), static_cast<int>(fy), 255, 255, 255);
      ++drawn;
    }
    write_text(c.flags.out, encode_ppm(img));
    r["format"] = "ppm";
    r["width"] = s.width;
    r["height"] = s.height;
    r["window"] = num(s.window);
    r["drawn"] = drawn;
    r["image"] = c.flags.out;
    std::cout << make_report("group limitset", c.hash, r, {}).dump(2) << "\n";
    return;
  }
  ordered_json pts = ordered_json::array();
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    ordered_json p;
    p["point"] = to_json(sample.points[i]);
    p["seed"] = g.letter_name(sample.seed_letters[i]);
    p["word_index"] = sample.word_indices[i];
    pts.push_back(p);
  }
  r["format"] = "json";
  r["samples"] = pts;
  emit(c, "group limitset", r);
}

void cmd_group_delta(const Context& c) {
  const SchottkyGroup g = build_group(c.config);
  DeltaOptions d = delta_options(c);
  if (c.flags.depth) d.max_depth = *c.flags.depth;
  emit(c, "group delta", delta_json(estimate_delta(g, d)));
}

void cmd_group_nielsen(const Context& c) {
  SchottkyGroup g = build_group(c.config);
  std::vector<NielsenMove> moves = c.config.nielsen_moves;
  for (const std::string& m : c.flags.moves) moves.push_back(parse_move(m, "--move"));
  if (moves.empty()) throw ConfigError("nielsen: no moves given (use --move or nielsen.moves)");
  DeltaOptions d = delta_options(c);
  if (c.flags.depth) d.max_depth = *c.flags.depth;
  auto delta_or_error = [&](const SchottkyGroup& grp) -> ordered_json {
    try {
      return delta_json(estimate_delta(grp, d));
    } catch (const DiagnosticFailure& e) {
      ordered_json j;
      j["error"] = e.what();
      j["details"] = e.details();
      return j;
    }
  };
  ordered_json r;
  r["initial"] = delta_or_error(g);
  ordered_json steps = ordered_json::array();
  static const char* names[] = {"invert", "swap", "multiply", "cycle"};
  for (const NielsenMove& m : moves) {
    NielsenResult res = nielsen(g, m);
    ordered_json s;
    s["move"] = names[static_cast<int>(m.kind)];
    s["i"] = m.i + 1;
    s["j"] = m.j + 1;
    s["classical"] = res.report.ok();
    s["violations"] = violations_json(res.report);
    s["delta"] = delta_or_error(res.group);
    steps.push_back(s);
    g = std::move(res.group);
  }
  r["steps"] = steps;
  emit(c, "group nielsen", r);
}

PSMeasure load_or_build_measure(const Context& c, const SchottkyGroup& g, int depth) {
  const std::optional<std::string> input = c.flags.input ? c.flags.input : c.config.measure.input;
  if (input) {
    std::ifstream in(*input);
    if (!in) throw ConfigError(*input + ": cannot open measure CSV");
    return read_measure_csv(in);
  }
  return build_ps(g, measure_delta(c, g), depth, std::nullopt, c.exec);
}

void cmd_measure_build(const Context& c) {
  const SchottkyGroup g = build_group(c.config);
  const int depth = c.flags.depth.value_or(c.config.measure.depth);
  const PSMeasure m = build_ps(g, measure_delta(c, g), depth, std::nullopt, c.exec);
  std::ostringstream csv;
  write_measure_csv(csv, m);
  write_text(c.flags.out, csv.str());
  if (!c.flags.out.empty()) {
    ordered_json r;
    r["atoms"] = m.atoms.size();
    r["delta"] = num(m.delta);
    r["depth"] = m.depth;
    r["basepoint"] = to_json(m.basepoint);
    r["total_mass"] = num(m.total_mass());
    r["csv"] = c.flags.out;
    std::cout << make_report("measure build", c.hash, r, {}).dump(2) << "\n";
  }
}

void cmd_measure_residual(const Context& c) {
  const SchottkyGroup g = build_group(c.config);
  const int depth = c.flags.depth.value_or(c.config.measure.depth);
  const PSMeasure m = load_or_build_measure(c, g, depth);
  const NayataniDensity F(m);
  const ConformalityCheck check =
      conformality_check(F, g, c.config.measure.conformality_samples,
                         c.flags.seed.value_or(c.config.measure.seed));
  ordered_json r;
  r["delta"] = num(m.delta);
  r["depth"] = m.depth;
  r["atoms"] = m.atoms.size();
  r["total_mass"] = num(m.total_mass());
  r["quasi_invariance_residual"] = num(check.measure_residual);
  ordered_json conf;
  conf["samples"] = c.config.measure.conformality_samples;
  conf["density_residual"] = num(check.density_residual);
  conf["constant"] = num(check.constant);
  r["conformality"] = conf;
  emit(c, "measure residual", r);
}

SeriesOptions series_options(const Context& c) {
  SeriesOptions o;
  o.max_len = c.flags.max_len.value_or(c.config.series.max_len);
  o.tol = c.flags.tol.value_or(c.config.series.tol);
  o.relative_tol = c.config.series.relative_tol;
  o.exec = c.exec;
  if (o.max_len < 0 || o.max_len > 16) throw ConfigError("--max-len: must be in [0, 16]");
  if (!(o.tol > 0.0)) throw ConfigError("--tol: must be positive");
  return o;
}

WeightMode weight_of(const Context& c) {
  if (!c.flags.weight) return c.config.series.weight;
  if (*c.flags.weight == "holomorphic") return WeightMode::Holomorphic;
  if (*c.flags.weight == "absolute") return WeightMode::Absolute;
  throw ConfigError("--weight: expected holomorphic or absolute");
}

ComplexPoint series_point(const Context& c) {
  if (c.flags.z) return parse_point(*c.flags.z, "--z");
  if (c.config.series.z) return *c.config.series.z;
  throw ConfigError("series: a point is required (--z or series.z)");
}

ordered_json evaluation_json(const SeriesEvaluation& e) {
  ordered_json r;
  r["value"] = to_json(e.value);
  r["weight"] = to_string(e.mode);
  r["verdict"] = to_string(e.verdict);
  r["max_len"] = e.max_len;
  r["terms"] = e.terms;
  r["tail_estimate"] = num(e.tail_estimate);
  ordered_json shells = ordered_json::array();
  for (const cplx& s : e.shells) shells.push_back(to_json(s));
  r["shells"] = shells;
  r["magnitudes"] = to_json(e.magnitudes);
  r["ratios"] = to_json(e.ratios);
  r["comparability"] = ordered_json::array({num(e.comparability_min), num(e.comparability_max)});
  return r;
}

void cmd_series_eval(const Context& c) {
  const SchottkyGroup g = build_group(c.config);
  const ComplexPoint z = series_point(c);
  const SeriesEvaluation e =
      evaluate(g, SeriesIntegrand::bloch_wigner(), z, weight_of(c), series_options(c));
  ordered_json r = evaluation_json(e);
  r["z"] = to_json(z);
  emit(c, "series eval", r);
  if (e.verdict != Verdict::Converged) {
    std::cerr << "series did not converge: verdict " << to_string(e.verdict) << "\n";
    throw ExitWith{kExitNonConvergence};
  }
}

void cmd_series_automorphy(const Context& c) {
  const SchottkyGroup g = build_group(c.config);
  std::vector<std::string> words = c.flags.words.empty() ? c.config.series.words : c.flags.words;
  if (words.empty()) {
    for (int l = 0; l < g.letter_count(); ++l) words.push_back(g.letter_name(static_cast<Letter>(l)));
    if (words.empty()) words.push_back("e");
  }
  const int n = c.flags.samples.value_or(c.config.series.samples);
  const std::vector<ComplexPoint> samples =
      fundamental_domain_samples(g, n, c.flags.seed.value_or(c.config.series.seed));
  const SeriesOptions o = series_options(c);
  const WeightMode mode = weight_of(c);
  ordered_json r;
  r["weight"] = to_string(mode);
  r["max_len"] = o.max_len;
  ordered_json per_word = ordered_json::array();
  double worst = 0.0;
  for (const std::string& w : words) {
    const AutomorphyResult a =
        automorphy_residual(g, SeriesIntegrand::bloch_wigner(), samples, parse_word(g, w), mode, o);
    ordered_json j;
    j["word"] = w;
    j["residual"] = num(a.residual);
    double bound = 0.0;
    ordered_json pts = ordered_json::array();
    for (const AutomorphySample& s : a.samples) {
      bound = std::max(bound, s.bound);
      ordered_json p;
      p["z"] = to_json(s.z);
      p["residual"] = num(s.residual);
      p["bound"] = num(s.bound);
      p["tail"] = num(s.tail);
      pts.push_back(p);
    }
    j["max_bound"] = num(bound);
    j["samples"] = pts;
    per_word.push_back(j);
    worst = std::max(worst, a.residual);
  }
  r["residual"] = num(worst);
  r["words"] = per_word;
  emit(c, "series automorphy", r);
}

void cmd_series_report(const Context& c) {
  const SchottkyGroup g = build_group(c.config);
  const ComplexPoint z =
      c.flags.z || c.config.series.z ? series_point(c) : g.default_basepoint();
  DeltaOptions d = delta_options(c);
  if (c.flags.depth) d.max_depth = *c.flags.depth;
  const int max_len = c.flags.max_len.value_or(c.config.series.max_len);
  const ConvergenceReport rep = convergence_report(g, z, max_len, d);
  ordered_json r;
  r["z"] = to_json(rep.z);
  r["max_len"] = rep.max_len;
  r["delta"] = delta_json(rep.delta);
  ordered_json rows = ordered_json::array();
  for (const ReportRow& row : rep.rows) {
    ordered_json j;
    j["label"] = row.label;
    j["s"] = num(row.s);
    j["magnitudes"] = to_json(row.magnitudes);
    j["ratios"] = to_json(row.ratios);
    rows.push_back(j);
  }
  r["rows"] = rows;
  emit(c, "series report", r);
}

void cmd_bers(const Context& c) {
  const SchottkyGroup g = build_group(c.config);
  const int depth = c.flags.depth.value_or(c.config.bers.measure_depth);
  const PSMeasure m = load_or_build_measure(c, g, depth);
  const NayataniDensity F(m);
  BersOptions o;
  o.n_samples = c.flags.samples.value_or(c.config.bers.samples);
  o.seed = c.flags.seed.value_or(c.config.bers.seed);
  o.exec = c.exec;
  const BersResult b = bers_integral(g, F, SeriesIntegrand::bloch_wigner(), o);
  ordered_json r;
  r["delta"] = num(m.delta);
  r["measure_depth"] = m.depth;
  r["n_samples"] = b.n_samples;
  r["seed"] = o.seed;
  r["estimate"] = num(b.estimate);
  r["stderr"] = num(b.stderr_);
  r["resamples"] = b.resamples;
  ordered_json tail;
  tail["decile_shares"] = to_json(std::vector<double>(b.decile_shares.begin(), b.decile_shares.end()));
  tail["max_share"] = num(b.max_share);
  tail["heavy_tail"] = b.heavy_tail;
  r["tail"] = tail;
  r["shell_contributions"] = to_json(b.shell_contributions);
  r["shell_counts"] = b.shell_counts;
  emit(c, "bers", r);
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Single-valued polylogarithms and Poincare series over Schottky groups", "bwp"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON run configuration");
  app.add_option("--out", f.out, "output path (default stdout)");
  app.add_option("--tol", f.tol, "absolute tolerance");
  app.add_option("--max-len", f.max_len, "maximum word length");
  app.add_option("--depth", f.depth, "enumeration / measure depth");
  app.add_option("--seed", f.seed, "random seed");
  app.add_option("--weight", f.weight, "holomorphic|absolute");
  app.add_option("--threads", f.threads, "worker threads")->check(CLI::Range(1u, 256u));
  auto* strict = app.add_flag("--strict", f.strict, "bit-reproducible summation (default)");
  app.add_flag("--fast", f.fast, "plain summation")->excludes(strict);

  std::function<void(const Context&)> action;
  std::string name;
  auto leaf = [&](CLI::App* parent, const std::string& cmd, const std::string& help,
                  const std::string& full, void (*fn)(const Context&)) {
    CLI::App* sub = parent->add_subcommand(cmd, help);
    sub->fallthrough();
    sub->callback([&action, &name, full, fn] {
      action = fn;
      name = full;
    });
    return sub;
  };

  auto* polylog = leaf(&app, "polylog", "Li_n, Bloch-Wigner and Ramakrishnan functions", "polylog",
                       cmd_polylog);
  polylog->add_flag("--bloch-wigner", f.bloch_wigner, "Bloch-Wigner D(z)");
  polylog->add_option("--li", f.li, "classical Li_n(z)");
  polylog->add_option("--ramakrishnan", f.ramakrishnan, "Ramakrishnan D_m(z)");
  polylog->add_option("--odd-correction", f.odd_correction, "twice-factorial|factorial-of-2m");
  polylog->add_option("--z", f.z, "argument re,im or inf");

  auto* elliptic = leaf(&app, "elliptic", "Bloch's elliptic dilogarithm", "elliptic", cmd_elliptic);
  elliptic->add_option("--q", f.q, "nome re,im");
  elliptic->add_option("--z", f.z, "argument re,im");

  CLI::App* group = app.add_subcommand("group", "Schottky group operations");
  group->require_subcommand(1);
  group->fallthrough();
  leaf(group, "validate", "check the classical Schottky condition", "group validate",
       cmd_group_validate);
  auto* limitset = leaf(group, "limitset", "sample or render the limit set", "group limitset",
                        cmd_group_limitset);
  limitset->add_option("--format", f.format, "json|ppm");
  limitset->add_option("--width", f.width, "image width");
  limitset->add_option("--height", f.height, "image height");
  limitset->add_option("--window", f.window, "half-width R of the window [-R, R]^2");
  leaf(group, "delta", "critical exponent estimate", "group delta", cmd_group_delta);
  auto* nielsen_cmd = leaf(group, "nielsen", "apply Nielsen moves and re-estimate delta",
                           "group nielsen", cmd_group_nielsen);
  nielsen_cmd->add_option("--move", f.moves, "invert:i, swap:i:j, multiply:i:j or cycle (1-based)");

  CLI::App* measure = app.add_subcommand("measure", "Patterson-Sullivan measures");
  measure->require_subcommand(1);
  measure->fallthrough();
  auto* mbuild = leaf(measure, "build", "build and export a measure as CSV", "measure build",
                      cmd_measure_build);
  mbuild->add_option("--delta", f.delta, "exponent (default: estimated)");
  auto* mres = leaf(measure, "residual", "quasi-invariance and conformality residuals",
                    "measure residual", cmd_measure_residual);
  mres->add_option("--delta", f.delta, "exponent (default: estimated)");
  mres->add_option("--input", f.input, "measure CSV to test instead of building one");

  CLI::App* series = app.add_subcommand("series", "Poincare series of D");
  series->require_subcommand(1);
  series->fallthrough();
  leaf(series, "eval", "evaluate the truncated series", "series eval", cmd_series_eval)
      ->add_option("--z", f.z, "point re,im");
  auto* autom = leaf(series, "automorphy", "automorphy residuals", "series automorphy",
                     cmd_series_automorphy);
  autom->add_option("--word", f.words, "group word such as a, B or ab");
  autom->add_option("--samples", f.samples, "number of sample points");
  leaf(series, "report", "shell magnitudes at s = delta, (1 + delta) / 2, 1", "series report",
       cmd_series_report)
      ->add_option("--z", f.z, "point re,im or inf");

  auto* bers = leaf(&app, "bers", "Monte-Carlo integral test", "bers", cmd_bers);
  bers->add_option("--samples", f.samples, "Monte-Carlo samples");
  bers->add_option("--delta", f.delta, "exponent (default: estimated)");
  bers->add_option("--input", f.input, "measure CSV instead of building one");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    Context c;
    c.flags = f;
    if (!f.config.empty()) c.config = parse_config(f.config);
    c.hash = fnv1a(c.config.canonical);
    c.exec.threads = f.threads;
    c.exec.mode = f.fast ? ExecMode::Fast : ExecMode::Strict;
    action(c);
    return kExitOk;
  } catch (const ExitWith& e) {
    return e.code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const GroupValidationError& e) {
    std::cerr << "config error: invalid group: " << e.report().summary() << "\n";
    return kExitConfig;
  } catch (const InvalidParameter& e) {
    std::cerr << "invalid parameter: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DiagnosticFailure& e) {
    std::cerr << "non-convergence: " << e.what() << "\n" << e.details() << "\n";
    return kExitNonConvergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace bwp::cli
