#pragma once

// Residual and property checks over seeded sample points of TM.
//
// Every check is deterministic in (scenario, seed): points are drawn from a
// fixed mt19937_64 stream and reports are assembled in point order.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "glweyl/connection.hpp"
#include "glweyl/metric.hpp"

namespace glweyl {

inline constexpr double kSymbolicTolerance = 1e-9;
inline constexpr double kFiniteDifferenceTolerance = 1e-6;
inline constexpr double kClosednessSymbolicTolerance = 1e-12;
inline constexpr double kSymmetryTolerance = 1e-12;
inline constexpr double kReductionYSensitivityTolerance = 1e-8;
inline constexpr double kUniquenessMinSlope = 0.1;
inline constexpr double kUniquenessLinearityTolerance = 0.05;

/// Coordinate box [lo, hi] for each x^i and y^i.
struct SampleBox {
  std::vector<std::pair<double, double>> x;
  std::vector<std::pair<double, double>> y;

  std::string describe() const;
};

/// Points p with |e(p)| < margin for any exclusion field e are rejected.
struct Exclusions {
  std::vector<ScalarField> fields;
  std::vector<std::string> labels;
  double margin = 1e-3;
};

/// Everything one verification run needs: the anchor pair (g0, w0) of a
/// Weyl structure, the nonlinear connection, test gauges, the sampling
/// domain and engine settings.
struct Scenario {
  Scenario(std::string name, GLMetric metric, NonlinearConnection nonlinear, OneForm weyl_anchor);

  std::string name;
  GLMetric metric;
  NonlinearConnection nonlinear;
  /// Set when `nonlinear` was derived from the metric's Levi-Civita symbols.
  bool canonical_nonlinear = false;
  OneForm weyl_anchor;
  std::vector<ScalarField> gauges;
  std::vector<std::string> gauge_labels;
  SampleBox box;
  Exclusions exclusions;
  DerivativeEngine engine;
  std::size_t points = 64;
  std::uint64_t seed = 42;
  /// Replaces the engine default on residual checks when set.
  std::optional<double> tolerance;

  int dimension() const noexcept { return metric.dimension(); }

  /// Throws std::invalid_argument if dimensions disagree or a gauge or
  /// Weyl component depends on y.
  void check_consistency() const;

  double residual_tolerance() const;
  WeylStructure weyl_structure() const;
};

/// Uniform points in the box with rejection on exclusions and on the
/// metric's validity predicate. Throws std::runtime_error if too few
/// points survive after a bounded number of attempts.
std::vector<PointTM> sample_points(const Scenario& s);
std::vector<PointTM> sample_points(const Scenario& s, std::size_t count, std::uint64_t seed);

struct Witness {
  PointTM point;
  /// 0-based index triple (or pair, with -1 padding) where the worst value
  /// was attained.
  std::array<int, 3> index{-1, -1, -1};
  std::optional<std::size_t> gauge;
};

struct CheckReport {
  /// upper: pass iff worst_residual <= tolerance.
  /// lower: pass iff worst_residual >= tolerance (probe-style checks).
  enum class Bound { upper, lower };

  std::string name;
  bool passed = false;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  Bound bound = Bound::upper;
  std::optional<Witness> witness;
  std::size_t point_count = 0;
  std::string engine;
  std::uint64_t seed = 0;
  std::string domain;
  /// Named secondary measurements; `conditions` lists extra requirements
  /// that must also hold for the check to pass.
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, bool>> conditions;
  std::string message;

  /// passed = bound satisfied && every condition holds.
  void finalize();
};

/// Tracks the worst |value| over points and index triples.
class WorstTracker {
 public:
  void offer(double value, const PointTM& p, std::array<int, 3> index, std::optional<std::size_t> gauge = {});
  void offer(const Array3& values, const PointTM& p, std::optional<std::size_t> gauge = {});
  double worst() const noexcept { return worst_; }
  const std::optional<Witness>& witness() const noexcept { return witness_; }

 private:
  double worst_ = 0.0;
  std::optional<Witness> witness_;
};

CheckReport check_metric(const Scenario& s);
/// Metricity of the Chern-Rund connection plus its symmetry defects.
CheckReport check_cr(const Scenario& s);
/// Diagnostic: residual of the Chern-Rund formula without the 1/2 factor.
/// Passes iff the residual exceeds `min_residual`.
CheckReport check_cr_unnormalized(const Scenario& s, double min_residual = 1e-2);
CheckReport check_compatibility(const Scenario& s);
CheckReport check_conformal_invariance(const Scenario& s);
CheckReport check_vertical_failure(const Scenario& s);
CheckReport check_closedness(const Scenario& s);
/// Empty when the metric depends on y.
std::optional<CheckReport> check_riemannian_reduction(const Scenario& s);
/// Perturbs F^1_11 by epsilon and reports the induced compatibility
/// residual; passes iff residual >= 0.1 * epsilon.
CheckReport uniqueness_probe(const Scenario& s, double epsilon);
/// Runs the probe at 1e-4 and 1e-3 and also requires the residual ratio to
/// be 10 within 5%.
CheckReport check_uniqueness(const Scenario& s);

/// All applicable checks in fixed order.
std::vector<CheckReport> run_all_checks(const Scenario& s);

}  // namespace glweyl
