#include "bwp/psmeasure.hpp"

#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "bwp/errors.hpp"
#include "bwp/summation.hpp"

namespace bwp {

namespace {

constexpr double kAtomGuard = 1e-12;
constexpr double kResidualFloor = 1e-12;

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

double parse_double(const std::string& s, const std::string& context) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) {
    throw InvalidParameter("measure csv: cannot parse number '" + s + "' in " + context);
  }
  return v;
}

}  // namespace

double PSMeasure::total_mass() const {
  CompensatedSum sum;
  for (const Atom& a : atoms) sum.add(a.weight);
  return sum.value();
}

PSMeasure build_ps(const SchottkyGroup& group, double delta, int depth,
                   std::optional<ComplexPoint> basepoint, const ExecPolicy& exec) {
  if (depth < 2) {
    throw DiagnosticFailure("build_ps: depth must be >= 2 to populate every defining disk",
                            "depth=" + std::to_string(depth));
  }
  if (!(delta >= 0.0) || delta > 2.0) throw InvalidParameter("build_ps: delta must be in [0, 2]");
  PSMeasure m;
  m.delta = delta;
  m.depth = depth;
  m.basepoint = basepoint.value_or(group.default_basepoint());

  const std::vector<double> logs = shell_log_derivatives(group, depth, m.basepoint, exec);
  std::vector<double> raw(logs.size());
  CompensatedSum total;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    raw[i] = std::exp(delta * logs[i]);
    total.add(raw[i]);
  }
  const double norm = total.value();
  // Second pass for the atom positions; the enumeration order matches
  // shell_log_derivatives.
  std::size_t k = 0;
  m.atoms.resize(logs.size());
  for_each_word(group, depth, m.basepoint, [&](const Word& w) {
    if (static_cast<int>(w.length()) != depth) return;
    m.atoms[k].point = w.map.apply(m.basepoint);
    m.atoms[k].weight = raw[k] / norm;
    ++k;
  });
  return m;
}

std::vector<TestFunction> default_test_functions() {
  auto sphere = [](auto f) {
    return TestFunction([f](const ComplexPoint& p) {
      const ComplexPoint::Vec3 v = p.to_sphere();
      return f(v.x, v.y, v.z);
    });
  };
  return {
      sphere([](double, double, double) { return 1.0; }),
      sphere([](double x, double, double) { return x; }),
      sphere([](double, double y, double) { return y; }),
      sphere([](double, double, double z) { return z; }),
      sphere([](double x, double y, double) { return x * y; }),
      sphere([](double, double y, double z) { return y * z; }),
      sphere([](double x, double, double z) { return x * z; }),
      sphere([](double x, double y, double) { return x * x - y * y; }),
      sphere([](double, double, double z) { return 3.0 * z * z - 1.0; }),
  };
}

double quasi_invariance_residual(const PSMeasure& measure, const SchottkyGroup& group,
                                 const std::vector<TestFunction>& test_functions) {
  double worst = 0.0;
  for (int l = 0; l < group.letter_count(); ++l) {
    const MoebiusMap& g = group.letter_map(static_cast<Letter>(l));
    for (const TestFunction& f : test_functions) {
      CompensatedSum direct, pushed, scale;
      for (const Atom& a : measure.atoms) {
        const double fx = f(a.point);
        direct.add(a.weight * fx);
        scale.add(a.weight * std::abs(fx));
        const double jac = measure.delta == 0.0
                               ? 1.0
                               : std::pow(g.spherical_derivative(a.point), measure.delta);
        pushed.add(a.weight * jac * f(g.apply(a.point)));
      }
      const double r =
          std::abs(direct.value() - pushed.value()) / (scale.value() + kResidualFloor);
      worst = std::max(worst, r);
    }
  }
  return worst;
}

NayataniDensity::NayataniDensity(PSMeasure measure) : measure_(std::move(measure)) {
  if (measure_.atoms.empty()) throw InvalidParameter("NayataniDensity: empty measure");
  sphere_.reserve(measure_.atoms.size());
  for (const Atom& a : measure_.atoms) sphere_.push_back(a.point.to_sphere());
}

double NayataniDensity::nearest_atom_distance(const ComplexPoint& x) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Atom& a : measure_.atoms) best = std::min(best, chordal(x, a.point));
  return best;
}

double NayataniDensity::F(const ComplexPoint& x) const {
  // phi = |X - Y|^2 / 2 for the unit vectors X, Y, which stays accurate for
  // nearby points.
  const ComplexPoint::Vec3 p = x.to_sphere();
  const double delta = measure_.delta;
  CompensatedSum sum;
  for (std::size_t i = 0; i < sphere_.size(); ++i) {
    const double dx = p.x - sphere_[i].x, dy = p.y - sphere_[i].y, dz = p.z - sphere_[i].z;
    const double c2 = dx * dx + dy * dy + dz * dz;
    if (c2 <= kAtomGuard * kAtomGuard) {
      throw SingularArgument("nayatani_F: evaluation point coincides with an atom");
    }
    sum.add(measure_.atoms[i].weight * std::exp(-delta * std::log(0.5 * c2)));
  }
  return sum.value();
}

double NayataniDensity::metric_factor(const ComplexPoint& x) const {
  if (!(measure_.delta > 0.0)) {
    throw InvalidParameter("metric_factor: requires delta > 0");
  }
  return std::pow(F(x), 2.0 / measure_.delta);
}

ConformalityCheck conformality_check(const NayataniDensity& density, const SchottkyGroup& group,
                                     int n_samples, std::uint64_t seed, double window) {
  if (n_samples < 1) throw InvalidParameter("conformality_check: need at least one sample");
  ConformalityCheck out;
  const double delta = density.delta();
  for (const ComplexPoint& x : fundamental_domain_samples(group, n_samples, seed, window)) {
    const double fx = density.F(x);
    for (int l = 0; l < group.letter_count(); ++l) {
      const MoebiusMap& g = group.letter_map(static_cast<Letter>(l));
      const double lhs = density.F(g.apply(x)) * std::pow(g.spherical_derivative(x), delta);
      out.density_residual = std::max(out.density_residual, std::abs(lhs - fx) / fx);
    }
  }
  out.measure_residual = quasi_invariance_residual(density.measure(), group);
  out.constant = out.measure_residual > 0.0 ? out.density_residual / out.measure_residual
                                            : std::numeric_limits<double>::infinity();
  return out;
}

AsymptoticProfile asymptotic_profile(const NayataniDensity& density, const ComplexPoint& y0,
                                     const std::vector<double>& radii, double direction) {
  if (radii.size() < 2) throw InvalidParameter("asymptotic_profile: need at least two radii");
  AsymptoticProfile prof;
  prof.limit_point = y0;
  double nearest = std::numeric_limits<double>::infinity();
  for (const Atom& a : density.measure().atoms) {
    const double c = chordal(y0, a.point);
    if (c > kAtomGuard) nearest = std::min(nearest, c);
  }
  prof.resolution = std::isfinite(nearest) ? 2.0 * nearest : 0.0;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double r = radii[i];
    if (!(r > 0.0) || r >= 2.0) {
      throw InvalidParameter("asymptotic_profile: radii must lie in (0, 2)");
    }
    if (i > 0 && !(r < radii[i - 1])) {
      throw InvalidParameter("asymptotic_profile: radii must be strictly decreasing");
    }
    if (r < prof.resolution) {
      std::ostringstream os;
      os << "asymptotic_profile: radius " << r << " is below the atom resolution "
         << prof.resolution << " of the measure near the limit point";
      throw InvalidParameter(os.str());
    }
  }
  // Sphere rotation taking 0 to y0.
  auto from_origin = [&y0](cplx u) -> ComplexPoint {
    if (y0.is_infinite()) return u == 0.0 ? ComplexPoint::infinity() : ComplexPoint(1.0 / u);
    const cplx y = y0.value();
    const cplx den = 1.0 - std::conj(y) * u;
    if (den == 0.0) return ComplexPoint::infinity();
    return ComplexPoint((u + y) / den);
  };
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double r : radii) {
    const double t = r / std::sqrt(4.0 - r * r);
    const ComplexPoint x = from_origin(std::polar(t, direction));
    const double f = density.F(x);
    prof.rows.push_back({r, f});
    const double lx = std::log(r), ly = std::log(f);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(radii.size());
  prof.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return prof;
}

void write_measure_csv(std::ostream& os, const PSMeasure& measure) {
  nlohmann::ordered_json header;
  header["delta"] = measure.delta;
  header["depth"] = measure.depth;
  if (measure.basepoint.is_infinite()) {
    header["basepoint"] = "inf";
  } else {
    header["basepoint"] = {measure.basepoint.value().real(), measure.basepoint.value().imag()};
  }
  os << "# " << header.dump() << "\n";
  os << "re,im,weight\n";
  for (const Atom& a : measure.atoms) {
    if (a.point.is_infinite()) {
      os << "inf,0";
    } else {
      os << format_double(a.point.value().real()) << "," << format_double(a.point.value().imag());
    }
    os << "," << format_double(a.weight) << "\n";
  }
}

PSMeasure read_measure_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# ", 0) != 0) {
    throw InvalidParameter("measure csv: missing '# {json}' header line");
  }
  PSMeasure m;
  try {
    const auto header = nlohmann::json::parse(line.substr(2));
    m.delta = header.at("delta").get<double>();
    m.depth = header.at("depth").get<int>();
    const auto& bp = header.at("basepoint");
    if (bp.is_string() && bp.get<std::string>() == "inf") {
      m.basepoint = ComplexPoint::infinity();
    } else {
      m.basepoint = ComplexPoint(cplx(bp.at(0).get<double>(), bp.at(1).get<double>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw InvalidParameter(std::string("measure csv: bad header: ") + e.what());
  }
  if (!std::getline(is, line) || line != "re,im,weight") {
    throw InvalidParameter("measure csv: expected 're,im,weight' column header");
  }
  int row = 2;
  while (std::getline(is, line)) {
    ++row;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    const std::string where = "row " + std::to_string(row);
    if (fields.size() != 3) throw InvalidParameter("measure csv: " + where + " needs 3 fields");
    Atom a;
    if (fields[0] == "inf") {
      a.point = ComplexPoint::infinity();
    } else {
      a.point = ComplexPoint(cplx(parse_double(fields[0], where), parse_double(fields[1], where)));
    }
    a.weight = parse_double(fields[2], where);
    m.atoms.push_back(a);
  }
  return m;
}

}  // namespace bwp
