#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bwp/moebius.hpp"
#include "bwp/parallel.hpp"
#include "bwp/psmeasure.hpp"
#include "bwp/schottky.hpp"

namespace bwp {

// A bounded real function on the sphere. The evaluator must be pure: it is
// called concurrently from worker threads.
struct SeriesIntegrand {
  std::function<double(const ComplexPoint&)> evaluator;
  double bound = 0.0;  // declared sup |evaluator|
  std::string name;

  // Bloch-Wigner D with bound 1.015.
  static SeriesIntegrand bloch_wigner();
  SeriesIntegrand scaled(double factor) const;
};

enum class WeightMode {
  Holomorphic,  // gamma'(z) = (cz + d)^-2, complex
  Absolute,     // spherical derivative of gamma at z, real
};

enum class Verdict { Converged, Inconclusive, Diverging };

const char* to_string(WeightMode m);
const char* to_string(Verdict v);

struct SeriesOptions {
  int max_len = 10;
  double tol = 1e-12;
  // Compare the tail with tol * |value| instead of tol.
  bool relative_tol = false;
  ExecPolicy exec;
};

struct SeriesEvaluation {
  cplx value;
  // shells[n]: sum of weight * integrand over words of length n.
  std::vector<cplx> shells;
  // magnitudes[n]: sum of |weight| over words of length n.
  std::vector<double> magnitudes;
  // ratios[n - 1] = magnitudes[n] / magnitudes[n - 1].
  std::vector<double> ratios;
  // 2 * bound * S_N * r / (1 - r) with r the last ratio; infinite if r >= 1.
  double tail_estimate = 0.0;
  WeightMode mode = WeightMode::Holomorphic;
  Verdict verdict = Verdict::Inconclusive;
  int max_len = 0;
  // Range of spherical / Euclidean weight over all terms, i.e. of
  // (1 + |z|^2) / (1 + |gamma z|^2). Infinite entries occur only for
  // gamma z = infinity.
  double comparability_min = 0.0;
  double comparability_max = 0.0;
  std::uint64_t terms = 0;
};

// Truncated Poincare series sum over |gamma| <= max_len of
// weight(gamma, z) * integrand(gamma z). Throws NearLimitSet when z cannot be
// reduced to the fundamental domain, InvalidParameter for a holomorphic
// evaluation at infinity, and InvalidParameter when the integrand exceeds its
// declared bound at an orbit point.
SeriesEvaluation evaluate(const SchottkyGroup& group, const SeriesIntegrand& integrand,
                          const ComplexPoint& z, WeightMode mode,
                          const SeriesOptions& options = {});

struct AutomorphySample {
  ComplexPoint z;
  double residual = 0.0;
  // (2 * tail + 1e-9) / (|value| + tol), with tail the larger of the two
  // series' tail estimates in the units of the right-hand side.
  double bound = 0.0;
  cplx value;
  double tail = 0.0;
};

struct AutomorphyResult {
  double residual = 0.0;  // max over samples
  std::vector<AutomorphySample> samples;
};

// Compares weight(g, z) * S(g z) with S(z), both truncated at max_len, for
// the word g (letters) at every sample point.
AutomorphyResult automorphy_residual(const SchottkyGroup& group, const SeriesIntegrand& integrand,
                                     const std::vector<ComplexPoint>& samples,
                                     const std::vector<Letter>& g, WeightMode mode,
                                     const SeriesOptions& options = {});

struct BersOptions {
  int n_samples = 10000;
  std::uint64_t seed = 1;
  // Maximum fraction of singular-hit resamples before giving up.
  double max_resample_fraction = 0.01;
  // Heavy-tail flag thresholds on the sorted sample contributions.
  double top_decile_threshold = 0.9;
  double max_share_threshold = 0.1;
  ExecPolicy exec;
};

struct BersResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
  int n_samples = 0;
  int resamples = 0;
  // Share of the total contributed by each decile of the sorted samples,
  // smallest values first.
  std::array<double, 10> decile_shares{};
  double max_share = 0.0;
  bool heavy_tail = false;
  // Contribution to the estimate from samples whose reduction to the
  // fundamental domain takes k letters (last entry: k >= 12 or unresolved).
  // Only filled when a group is supplied.
  std::vector<double> shell_contributions;
  std::vector<int> shell_counts;
};

// Monte-Carlo estimate of the integral over the unit sphere of
// F^(2/delta) |integrand| dA with uniform spherical sampling.
BersResult bers_integral(const NayataniDensity& density, const SeriesIntegrand& integrand,
                         const BersOptions& options = {});
// Same, with the estimate also split by orbit shell of the group.
BersResult bers_integral(const SchottkyGroup& group, const NayataniDensity& density,
                         const SeriesIntegrand& integrand, const BersOptions& options = {});

struct ReportRow {
  double s = 0.0;
  std::string label;
  std::vector<double> magnitudes;  // P_n(s) at z, n = 0..max_len
  std::vector<double> ratios;      // P_n / P_{n-1}, n = 1..max_len
};

struct ConvergenceReport {
  ComplexPoint z;
  int max_len = 0;
  DeltaEstimate delta;
  std::vector<ReportRow> rows;  // s = delta, (1 + delta) / 2, 1
};

ConvergenceReport convergence_report(const SchottkyGroup& group, const ComplexPoint& z,
                                     int max_len, const DeltaOptions& delta_options = {});

}  // namespace bwp
