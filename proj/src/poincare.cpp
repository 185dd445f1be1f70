#include "bwp/poincare.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "bwp/errors.hpp"
#include "bwp/polylog.hpp"
#include "bwp/summation.hpp"

namespace bwp {

namespace {

constexpr double kBoundSlack = 1e-9;
constexpr double kAutomorphyFloor = 1e-9;
constexpr double inf = std::numeric_limits<double>::infinity();

// Per-depth accumulators of one subtree.
struct ShellAccumulator {
  std::vector<CompensatedComplexSum> strict_terms;
  std::vector<CompensatedSum> strict_mags;
  std::vector<cplx> fast_terms;
  std::vector<double> fast_mags;
  double cmp_min = inf;
  double cmp_max = 0.0;
  std::uint64_t terms = 0;

  explicit ShellAccumulator(std::size_t levels)
      : strict_terms(levels), strict_mags(levels), fast_terms(levels), fast_mags(levels) {}

  void add(int level, cplx term, double mag, ExecMode mode) {
    if (mode == ExecMode::Strict) {
      strict_terms[level].add(term);
      strict_mags[level].add(mag);
    } else {
      fast_terms[level] += term;
      fast_mags[level] += mag;
    }
    ++terms;
  }
};

void check_bound(const SeriesIntegrand& f, double v) {
  if (!(std::abs(v) <= f.bound * (1.0 + kBoundSlack))) {
    throw InvalidParameter("series integrand '" + f.name + "' exceeds its declared bound " +
                           std::to_string(f.bound) + " (value " + std::to_string(v) + ")");
  }
}

}  // namespace

SeriesIntegrand SeriesIntegrand::bloch_wigner() {
  return {[](const ComplexPoint& z) { return bwp::bloch_wigner(z); }, 1.015, "bloch_wigner"};
}

SeriesIntegrand SeriesIntegrand::scaled(double factor) const {
  auto inner = evaluator;
  return {[inner, factor](const ComplexPoint& z) { return factor * inner(z); },
          std::abs(factor) * bound, name + "*" + std::to_string(factor)};
}

const char* to_string(WeightMode m) {
  return m == WeightMode::Holomorphic ? "holomorphic" : "absolute";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged:
      return "converged";
    case Verdict::Inconclusive:
      return "inconclusive";
    case Verdict::Diverging:
      return "diverging";
  }
  return "?";
}

SeriesEvaluation evaluate(const SchottkyGroup& group, const SeriesIntegrand& integrand,
                          const ComplexPoint& z, WeightMode mode, const SeriesOptions& options) {
  if (options.max_len < 0) throw InvalidParameter("evaluate: max_len must be >= 0");
  if (!(options.tol > 0.0)) throw InvalidParameter("evaluate: tol must be positive");
  if (!(integrand.bound > 0.0) || !integrand.evaluator) {
    throw InvalidParameter("evaluate: integrand needs an evaluator and a positive bound");
  }
  if (mode == WeightMode::Holomorphic && z.is_infinite()) {
    throw InvalidParameter("evaluate: the holomorphic weight is undefined at infinity");
  }
  if (group.rank() > 0) reduce_to_fundamental_domain(group, z);

  const int N = group.rank() > 0 ? options.max_len : 0;
  const auto levels = static_cast<std::size_t>(N) + 1;
  const ExecMode exec_mode = options.exec.mode;
  const double z2 = z.is_finite() ? std::norm(z.value()) : 0.0;

  auto weight = [&](const MoebiusMap& m) -> cplx {
    return mode == WeightMode::Holomorphic ? m.derivative(z) : cplx(m.spherical_derivative(z));
  };
  auto visit = [&](ShellAccumulator& acc, int level, const MoebiusMap& m) {
    const ComplexPoint gz = m.apply(z);
    const double f = integrand.evaluator(gz);
    check_bound(integrand, f);
    const cplx w = weight(m);
    acc.add(level, w * f, std::abs(w), exec_mode);
    if (z.is_finite()) {
      const double c = gz.is_finite() ? (1.0 + z2) / (1.0 + std::norm(gz.value())) : inf;
      acc.cmp_min = std::min(acc.cmp_min, c);
      acc.cmp_max = std::max(acc.cmp_max, c);
    }
  };

  // Task 0 is the identity term; task 1 + l walks the subtree of letter l.
  const int letters = group.letter_count();
  std::vector<ShellAccumulator> parts(static_cast<std::size_t>(letters) + 1,
                                      ShellAccumulator(levels));
  parallel_for(parts.size(), options.exec.threads, [&](std::size_t t) {
    ShellAccumulator& acc = parts[t];
    if (t == 0) {
      visit(acc, 0, MoebiusMap());
      return;
    }
    std::vector<Letter> word{static_cast<Letter>(t - 1)};
    std::vector<MoebiusMap> maps(levels);
    maps[1] = group.letter_map(word[0]);
    auto recurse = [&](auto&& self, int level) -> void {
      visit(acc, level, maps[level]);
      if (level == N) return;
      for (int l = 0; l < letters; ++l) {
        const auto letter = static_cast<Letter>(l);
        if (letter == group.inverse_letter(word.back())) continue;
        maps[level + 1] = maps[level] * group.letter_map(letter);
        word.push_back(letter);
        self(self, level + 1);
        word.pop_back();
      }
    };
    if (N >= 1) recurse(recurse, 1);
  });

  SeriesEvaluation out;
  out.mode = mode;
  out.max_len = options.max_len;
  out.shells.assign(levels, 0.0);
  out.magnitudes.assign(levels, 0.0);
  out.comparability_min = inf;
  for (std::size_t n = 0; n < levels; ++n) {
    CompensatedComplexSum shell;
    CompensatedSum mag;
    cplx plain_shell = 0.0;
    double plain_mag = 0.0;
    for (const ShellAccumulator& acc : parts) {
      shell.add(acc.strict_terms[n]);
      mag.add(acc.strict_mags[n]);
      plain_shell += acc.fast_terms[n];
      plain_mag += acc.fast_mags[n];
    }
    out.shells[n] = exec_mode == ExecMode::Strict ? shell.value() : plain_shell;
    out.magnitudes[n] = exec_mode == ExecMode::Strict ? mag.value() : plain_mag;
  }
  for (const ShellAccumulator& acc : parts) {
    out.comparability_min = std::min(out.comparability_min, acc.cmp_min);
    out.comparability_max = std::max(out.comparability_max, acc.cmp_max);
    out.terms += acc.terms;
  }
  if (z.is_infinite()) out.comparability_min = out.comparability_max = 0.0;

  CompensatedComplexSum total;
  for (const cplx& s : out.shells) total.add(s);
  out.value = total.value();

  for (std::size_t n = 1; n < levels; ++n) {
    out.ratios.push_back(out.magnitudes[n] / out.magnitudes[n - 1]);
  }
  if (group.rank() == 0) {
    out.tail_estimate = 0.0;
    out.verdict = Verdict::Converged;
    return out;
  }
  const double r = out.ratios.empty() ? inf : out.ratios.back();
  out.tail_estimate =
      r < 1.0 ? 2.0 * integrand.bound * out.magnitudes.back() * r / (1.0 - r) : inf;
  const double threshold = options.relative_tol ? options.tol * std::abs(out.value) : options.tol;
  const auto last = out.ratios.end();
  const auto window = static_cast<std::ptrdiff_t>(std::min<std::size_t>(out.ratios.size(), 3));
  const bool decaying = window == 3 && std::all_of(last - 3, last, [](double x) { return x < 1.0; });
  const bool growing =
      window > 0 && std::all_of(last - window, last, [](double x) { return x >= 1.0; });
  if (decaying && out.tail_estimate <= threshold) {
    out.verdict = Verdict::Converged;
  } else if (growing) {
    out.verdict = Verdict::Diverging;
  } else {
    out.verdict = Verdict::Inconclusive;
  }
  return out;
}

AutomorphyResult automorphy_residual(const SchottkyGroup& group, const SeriesIntegrand& integrand,
                                     const std::vector<ComplexPoint>& samples,
                                     const std::vector<Letter>& g, WeightMode mode,
                                     const SeriesOptions& options) {
  for (Letter l : g) {
    if (l >= group.letter_count()) throw InvalidParameter("automorphy_residual: letter out of range");
  }
  const MoebiusMap gm = group.word_map(g);
  AutomorphyResult out;
  for (const ComplexPoint& z : samples) {
    const SeriesEvaluation base = evaluate(group, integrand, z, mode, options);
    const ComplexPoint gz = gm.apply(z);
    const SeriesEvaluation moved = evaluate(group, integrand, gz, mode, options);
    const cplx w = mode == WeightMode::Holomorphic ? gm.derivative(z)
                                                   : cplx(gm.spherical_derivative(z));
    AutomorphySample s;
    s.z = z;
    s.value = base.value;
    const double denom = std::abs(base.value) + options.tol;
    s.residual = std::abs(w * moved.value - base.value) / denom;
    s.tail = std::max(base.tail_estimate, std::abs(w) * moved.tail_estimate);
    s.bound = (2.0 * s.tail + kAutomorphyFloor) / denom;
    out.residual = std::max(out.residual, s.residual);
    out.samples.push_back(s);
  }
  return out;
}

namespace {

constexpr int kBersShells = 12;

BersResult bers_impl(const SchottkyGroup* group, const NayataniDensity& density,
                     const SeriesIntegrand& integrand, const BersOptions& options) {
  if (options.n_samples < 1000) throw InvalidParameter("bers_integral: n_samples must be >= 1000");
  if (!integrand.evaluator) throw InvalidParameter("bers_integral: missing integrand");
  if (!(density.delta() > 0.0)) throw InvalidParameter("bers_integral: requires delta > 0");

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  // Area-preserving: the height is uniform on [-1, 1], the angle on [0, 2 pi).
  auto draw = [&]() {
    const double h = 1.0 - 2.0 * unit(rng);
    const double phi = 2.0 * std::numbers::pi * unit(rng);
    const double rho = std::sqrt(std::max(0.0, 1.0 - h * h));
    return ComplexPoint::from_sphere({rho * std::cos(phi), rho * std::sin(phi), h});
  };
  auto integrand_at = [&](const ComplexPoint& p) {
    const double f = std::abs(integrand.evaluator(p));
    return f == 0.0 ? 0.0 : density.metric_factor(p) * f;
  };

  const auto n = static_cast<std::size_t>(options.n_samples);
  std::vector<ComplexPoint> points(n);
  for (auto& p : points) p = draw();
  auto shell_of = [&](const ComplexPoint& p) {
    try {
      return std::min<int>(kBersShells,
                           static_cast<int>(reduce_to_fundamental_domain(*group, p).word.size()));
    } catch (const NearLimitSet&) {
      return kBersShells;
    }
  };
  std::vector<double> values(n, 0.0);
  std::vector<char> singular(n, 0);
  std::vector<int> shells(n, 0);
  constexpr std::size_t kBlock = 256;
  parallel_for((n + kBlock - 1) / kBlock, options.exec.threads, [&](std::size_t b) {
    for (std::size_t i = b * kBlock; i < std::min(n, (b + 1) * kBlock); ++i) {
      try {
        values[i] = integrand_at(points[i]);
        if (group) shells[i] = shell_of(points[i]);
      } catch (const SingularArgument&) {
        singular[i] = 1;
      }
    }
  });

  BersResult out;
  out.n_samples = options.n_samples;
  const int max_resamples = static_cast<int>(options.max_resample_fraction * options.n_samples);
  for (std::size_t i = 0; i < n; ++i) {
    while (singular[i]) {
      if (++out.resamples > max_resamples) {
        throw DiagnosticFailure("bers_integral: too many samples hit measure atoms",
                                "resamples=" + std::to_string(out.resamples) +
                                    " n_samples=" + std::to_string(options.n_samples));
      }
      try {
        const ComplexPoint p = draw();
        values[i] = integrand_at(p);
        if (group) shells[i] = shell_of(p);
        singular[i] = 0;
      } catch (const SingularArgument&) {
      }
    }
  }

  CompensatedSum sum, sum_sq;
  for (double v : values) {
    sum.add(v);
    sum_sq.add(v * v);
  }
  const double total = sum.value();
  const double nd = static_cast<double>(n);
  const double mean = total / nd;
  const double var = std::max(0.0, (sum_sq.value() - nd * mean * mean) / (nd - 1.0));
  const double area = 4.0 * std::numbers::pi;
  out.estimate = area * mean;
  out.stderr_ = area * std::sqrt(var / nd);

  if (total > 0.0) {
    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    for (int d = 0; d < 10; ++d) {
      CompensatedSum part;
      const std::size_t lo = n * static_cast<std::size_t>(d) / 10;
      const std::size_t hi = n * static_cast<std::size_t>(d + 1) / 10;
      for (std::size_t i = lo; i < hi; ++i) part.add(sorted[i]);
      out.decile_shares[d] = part.value() / total;
    }
    out.max_share = sorted.back() / total;
    out.heavy_tail = out.decile_shares[9] > options.top_decile_threshold ||
                     out.max_share > options.max_share_threshold;
  }
  if (group) {
    std::vector<CompensatedSum> parts(kBersShells + 1);
    out.shell_counts.assign(kBersShells + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      parts[shells[i]].add(values[i]);
      ++out.shell_counts[shells[i]];
    }
    for (const CompensatedSum& p : parts) out.shell_contributions.push_back(area * p.value() / nd);
  }
  return out;
}

}  // namespace

BersResult bers_integral(const NayataniDensity& density, const SeriesIntegrand& integrand,
                         const BersOptions& options) {
  return bers_impl(nullptr, density, integrand, options);
}

BersResult bers_integral(const SchottkyGroup& group, const NayataniDensity& density,
                         const SeriesIntegrand& integrand, const BersOptions& options) {
  return bers_impl(&group, density, integrand, options);
}

ConvergenceReport convergence_report(const SchottkyGroup& group, const ComplexPoint& z,
                                     int max_len, const DeltaOptions& delta_options) {
  if (max_len < 1) throw InvalidParameter("convergence_report: max_len must be >= 1");
  ConvergenceReport out;
  out.z = z;
  out.max_len = max_len;
  out.delta = estimate_delta(group, delta_options);
  const double d = out.delta.delta;
  const std::vector<std::pair<double, std::string>> exponents{
      {d, "delta"}, {0.5 * (1.0 + d), "midpoint"}, {1.0, "one"}};
  for (const auto& [s, label] : exponents) {
    ReportRow row;
    row.s = s;
    row.label = label;
    row.magnitudes = shell_sums(group, s, max_len, z, delta_options.exec);
    for (int k = 1; k <= max_len; ++k) row.ratios.push_back(row.magnitudes[k] / row.magnitudes[k - 1]);
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace bwp
