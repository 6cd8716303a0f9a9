#pragma once

// Generalized Lagrange metrics together with conformal classes and Weyl structures.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "glweyl/field.hpp"

namespace glweyl {

/// Non-degeneracy threshold on |det g|.
inline constexpr double kDeterminantThreshold = 1e-12;
/// Largest accepted |g_ij - g_ji| (relative to max(1, |g_ij|)).
inline constexpr double kSymmetryThreshold = 1e-12;

struct Signature {
  int positive = 0;
  int negative = 0;

  friend bool operator==(const Signature&, const Signature&) = default;
};

std::string to_string(const Signature& s);

using ValidityPredicate = std::function<bool(const PointTM&)>;

/// A symmetric, non-degenerate (0,2) d-tensor field of constant signature.
/// Construction only checks shape; the pointwise conditions are established
/// by validate() over a sample set.
class GLMetric {
 public:
  explicit GLMetric(DTensorField g, std::optional<Signature> declared = std::nullopt, ValidityPredicate valid = {});

  /// Builds the full n x n field from upper-triangle entries, mirroring
  /// (i, j) onto (j, i). `upper` is indexed by the row-major flat index of
  /// (i, j) with i <= j; entries below the diagonal are ignored.
  static GLMetric symmetric(int n, const std::vector<ScalarField>& upper, std::optional<Signature> declared = std::nullopt,
                            ValidityPredicate valid = {});

  int dimension() const noexcept { return field_.dimension(); }
  const DTensorField& field() const noexcept { return field_; }
  const ScalarField& operator()(int i, int j) const { return field_(i, j); }
  const std::optional<Signature>& declared_signature() const noexcept { return declared_; }

  bool is_valid_at(const PointTM& p) const { return !valid_ || valid_(p); }
  const ValidityPredicate& validity() const noexcept { return valid_; }

  /// True iff every component is x-only.
  bool is_y_independent() const noexcept;

  Eigen::MatrixXd evaluate(const PointTM& p) const;

 private:
  DTensorField field_;
  std::optional<Signature> declared_;
  ValidityPredicate valid_;
};

struct PointDiagnostics {
  PointTM point;
  double determinant = 0.0;
  Signature signature;
  double symmetry_defect = 0.0;
};

struct SignatureReport {
  std::vector<PointDiagnostics> points;
  /// Declared signature, or the one observed at the first point.
  Signature reference;
  double worst_symmetry_defect = 0.0;
  double min_abs_determinant = 0.0;
  bool symmetric = true;
  bool nondegenerate = true;
  bool constant_signature = true;
  /// Index into `points` of the first point violating any clause.
  std::optional<std::size_t> first_violation;
  /// Number of sample points violating at least one clause.
  std::size_t violation_count = 0;

  bool passed() const noexcept { return symmetric && nondegenerate && constant_signature; }
};

/// Checks symmetry, non-degeneracy and constant signature at every point.
/// Throws std::invalid_argument on an empty sample set.
SignatureReport validate(const GLMetric& g, std::span<const PointTM> points);

/// Signature from eigenvalue sign counts of the symmetric part.
Signature signature_of(const Eigen::MatrixXd& g);

/// Numeric inverse g^{ij}(p). Throws SingularMetricError.
Eigen::MatrixXd inverse(const GLMetric& g, const PointTM& p);

/// e^{2f} g for an x-only gauge f. Throws std::invalid_argument if f
/// depends on y.
GLMetric conformal_scale(const GLMetric& g, const ScalarField& gauge);

/// A conformal class, addressed through gauges relative to its anchor.
class ConformalClass {
 public:
  explicit ConformalClass(GLMetric anchor) : anchor_(std::move(anchor)) {}

  const GLMetric& anchor() const noexcept { return anchor_; }
  GLMetric representative(const ScalarField& gauge) const { return conformal_scale(anchor_, gauge); }

 private:
  GLMetric anchor_;
};

/// Components w_i of a one-form w_i dx^i on the base.
using OneForm = std::vector<ScalarField>;

std::vector<double> evaluate(const OneForm& w, const PointTM& p);

/// A Weyl structure, stored only by its anchor form W(g0). The form of any
/// other representative e^{2f} g0 is derived as w0 + 2 df.
class WeylStructure {
 public:
  /// Throws std::invalid_argument unless every component is x-only and the
  /// component count matches the class dimension.
  WeylStructure(ConformalClass cls, OneForm anchor_form);

  const ConformalClass& conformal_class() const noexcept { return class_; }
  const OneForm& anchor_form() const noexcept { return anchor_form_; }

 private:
  ConformalClass class_;
  OneForm anchor_form_;
};

/// W(e^{2f} g0) = w0 + 2 df. df is symbolic or finite-difference according
/// to `eng`.
OneForm weyl_form(const WeylStructure& W, const ScalarField& gauge, const DerivativeEngine& eng);

/// Same rule applied to a bare one-form.
OneForm weyl_form(const OneForm& w0, const ScalarField& gauge, const DerivativeEngine& eng);

/// w^i = g^{ia} w_a at p.
std::vector<double> raise_index(const OneForm& w, const GLMetric& g, const PointTM& p);

/// w_i = g_{ia} w^a at p.
std::vector<double> lower_index(std::span<const double> w, const GLMetric& g, const PointTM& p);

/// (dw)_ij = d_i w_j - d_j w_i at p, as an n x n matrix.
Eigen::MatrixXd exterior_derivative(const OneForm& w, const PointTM& p, const DerivativeEngine& eng);

}  // namespace glweyl
