#include "glweyl/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace glweyl {

std::string to_string(const Signature& s) {
  return "(" + std::to_string(s.positive) + "," + std::to_string(s.negative) + ")";
}

GLMetric::GLMetric(DTensorField g, std::optional<Signature> declared, ValidityPredicate valid)
    : field_(std::move(g)), declared_(declared), valid_(std::move(valid)) {
  if (field_.upper() != 0 || field_.lower() != 2) throw std::invalid_argument("GLMetric: field must have valence (0,2)");
  if (declared_ && declared_->positive + declared_->negative != field_.dimension()) {
    throw std::invalid_argument("GLMetric: declared signature " + to_string(*declared_) + " does not sum to n = " +
                                std::to_string(field_.dimension()));
  }
}

GLMetric GLMetric::symmetric(int n, const std::vector<ScalarField>& upper, std::optional<Signature> declared,
                             ValidityPredicate valid) {
  const auto size = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (upper.size() != size) throw std::invalid_argument("GLMetric::symmetric: expected n*n slots");
  std::vector<ScalarField> full(size);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const ScalarField& entry = upper[static_cast<std::size_t>(i * n + j)];
      full[static_cast<std::size_t>(i * n + j)] = entry;
      full[static_cast<std::size_t>(j * n + i)] = entry;
    }
  }
  return GLMetric(DTensorField(n, 0, 2, std::move(full)), declared, std::move(valid));
}

bool GLMetric::is_y_independent() const noexcept {
  for (const auto& c : field_.components()) {
    if (!c.is_x_only()) return false;
  }
  return true;
}

Eigen::MatrixXd GLMetric::evaluate(const PointTM& p) const {
  const int n = dimension();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = field_(i, j)(p);
  }
  return m;
}

Signature signature_of(const Eigen::MatrixXd& g) {
  const Eigen::MatrixXd sym = 0.5 * (g + g.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  Signature s;
  for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
    const double lambda = solver.eigenvalues()(k);
    if (lambda > 0.0) ++s.positive;
    if (lambda < 0.0) ++s.negative;
  }
  return s;
}

SignatureReport validate(const GLMetric& g, std::span<const PointTM> points) {
  if (points.empty()) throw std::invalid_argument("validate: empty sample set");
  const int n = g.dimension();
  SignatureReport report;
  report.min_abs_determinant = std::numeric_limits<double>::infinity();
  report.points.reserve(points.size());

  for (std::size_t k = 0; k < points.size(); ++k) {
    const Eigen::MatrixXd m = g.evaluate(points[k]);
    PointDiagnostics diag;
    diag.point = points[k];
    diag.determinant = m.determinant();
    diag.signature = signature_of(m);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const double scale = std::max({1.0, std::abs(m(i, j)), std::abs(m(j, i))});
        diag.symmetry_defect = std::max(diag.symmetry_defect, std::abs(m(i, j) - m(j, i)) / scale);
      }
    }

    if (k == 0) report.reference = g.declared_signature().value_or(diag.signature);

    const bool symmetric = diag.symmetry_defect <= kSymmetryThreshold;
    const bool nondegenerate = std::abs(diag.determinant) > kDeterminantThreshold;
    const bool same_signature = diag.signature == report.reference;
    report.symmetric = report.symmetric && symmetric;
    report.nondegenerate = report.nondegenerate && nondegenerate;
    report.constant_signature = report.constant_signature && same_signature;
    if (!(symmetric && nondegenerate && same_signature)) {
      ++report.violation_count;
      if (!report.first_violation) report.first_violation = k;
    }
    report.worst_symmetry_defect = std::max(report.worst_symmetry_defect, diag.symmetry_defect);
    report.min_abs_determinant = std::min(report.min_abs_determinant, std::abs(diag.determinant));
    report.points.push_back(std::move(diag));
  }
  return report;
}

Eigen::MatrixXd inverse(const GLMetric& g, const PointTM& p) {
  const Eigen::MatrixXd m = g.evaluate(p);
  const double det = m.determinant();
  if (!(std::abs(det) > kDeterminantThreshold)) {
    throw SingularMetricError("metric is singular at " + to_string(p) + " (det = " + std::to_string(det) + ")");
  }
  return m.inverse();
}

GLMetric conformal_scale(const GLMetric& g, const ScalarField& gauge) {
  if (!gauge.is_x_only()) throw std::invalid_argument("conformal_scale: gauge must depend on x only");
  const ScalarField factor = exp(2.0 * gauge);
  std::vector<ScalarField> scaled;
  scaled.reserve(g.field().size());
  for (const auto& c : g.field().components()) scaled.push_back(factor * c);
  return GLMetric(DTensorField(g.dimension(), 0, 2, std::move(scaled)), g.declared_signature(), g.validity());
}

std::vector<double> evaluate(const OneForm& w, const PointTM& p) {
  std::vector<double> out;
  out.reserve(w.size());
  for (const auto& c : w) out.push_back(c(p));
  return out;
}

WeylStructure::WeylStructure(ConformalClass cls, OneForm anchor_form)
    : class_(std::move(cls)), anchor_form_(std::move(anchor_form)) {
  if (static_cast<int>(anchor_form_.size()) != class_.anchor().dimension()) {
    throw std::invalid_argument("WeylStructure: one-form has " + std::to_string(anchor_form_.size()) +
                                " components, expected " + std::to_string(class_.anchor().dimension()));
  }
  for (const auto& c : anchor_form_) {
    if (!c.is_x_only()) throw std::invalid_argument("WeylStructure: one-form components must depend on x only");
  }
}

OneForm weyl_form(const OneForm& w0, const ScalarField& gauge, const DerivativeEngine& eng) {
  if (!gauge.is_x_only()) throw std::invalid_argument("weyl_form: gauge must depend on x only");
  OneForm out;
  out.reserve(w0.size());
  for (std::size_t i = 0; i < w0.size(); ++i) {
    out.push_back(w0[i] + 2.0 * partial_field(gauge, Variable::x(static_cast<int>(i)), eng));
  }
  return out;
}

OneForm weyl_form(const WeylStructure& W, const ScalarField& gauge, const DerivativeEngine& eng) {
  return weyl_form(W.anchor_form(), gauge, eng);
}

std::vector<double> raise_index(const OneForm& w, const GLMetric& g, const PointTM& p) {
  const Eigen::MatrixXd inv = inverse(g, p);
  const std::vector<double> lower = evaluate(w, p);
  const Eigen::VectorXd raised = inv * Eigen::Map<const Eigen::VectorXd>(lower.data(), static_cast<Eigen::Index>(lower.size()));
  return {raised.data(), raised.data() + raised.size()};
}

std::vector<double> lower_index(std::span<const double> w, const GLMetric& g, const PointTM& p) {
  const Eigen::MatrixXd m = g.evaluate(p);
  const Eigen::VectorXd lowered = m * Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return {lowered.data(), lowered.data() + lowered.size()};
}

Eigen::MatrixXd exterior_derivative(const OneForm& w, const PointTM& p, const DerivativeEngine& eng) {
  const int n = static_cast<int>(w.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      d(i, j) = partial_x(w[static_cast<std::size_t>(j)], i, p, eng) - partial_x(w[static_cast<std::size_t>(i)], j, p, eng);
    }
  }
  return d;
}

}  // namespace glweyl
