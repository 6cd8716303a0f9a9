#include "glweyl/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <locale>
#include <random>
#include <sstream>
#include <stdexcept>

namespace glweyl {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(12);
  os << v;
  return os.str();
}

CheckReport make_report(const Scenario& s, std::string name, double tolerance, std::size_t point_count) {
  CheckReport r;
  r.name = std::move(name);
  r.tolerance = tolerance;
  r.point_count = point_count;
  r.engine = s.engine.name();
  r.seed = s.seed;
  r.domain = s.box.describe();
  return r;
}

void take_worst(CheckReport& r, const WorstTracker& t) {
  r.worst_residual = t.worst();
  r.witness = t.witness();
}

double closedness_tolerance(const Scenario& s) {
  if (s.tolerance) return *s.tolerance;
  return s.engine.is_symbolic() ? kClosednessSymbolicTolerance : kFiniteDifferenceTolerance;
}

}  // namespace

std::string SampleBox::describe() const {
  std::string out;
  auto append = [&out](const char* prefix, const std::vector<std::pair<double, double>>& ranges) {
    for (std::size_t i = 0; i < ranges.size(); ++i) {
      if (!out.empty()) out += ' ';
      out += prefix + std::to_string(i + 1) + " in [" + fmt(ranges[i].first) + ", " + fmt(ranges[i].second) + "]";
    }
  };
  append("x", x);
  append("y", y);
  return out;
}

Scenario::Scenario(std::string name_, GLMetric metric_, NonlinearConnection nonlinear_, OneForm weyl_anchor_)
    : name(std::move(name_)),
      metric(std::move(metric_)),
      nonlinear(std::move(nonlinear_)),
      weyl_anchor(std::move(weyl_anchor_)),
      gauges{ScalarField::constant(0.0)},
      gauge_labels{"0"} {
  const int n = metric.dimension();
  box.x.assign(static_cast<std::size_t>(n), {-1.0, 1.0});
  box.y.assign(static_cast<std::size_t>(n), {-1.0, 1.0});
}

void Scenario::check_consistency() const {
  const int n = dimension();
  if (nonlinear.dimension() != n) throw std::invalid_argument("nonlinear connection dimension differs from metric");
  if (static_cast<int>(weyl_anchor.size()) != n) throw std::invalid_argument("Weyl form must have n components");
  for (const auto& w : weyl_anchor) {
    if (!w.is_x_only()) throw std::invalid_argument("Weyl form components must depend on x only");
  }
  for (const auto& f : gauges) {
    if (!f.is_x_only()) throw std::invalid_argument("gauges must depend on x only");
  }
  if (gauge_labels.size() != gauges.size()) throw std::invalid_argument("one label per gauge required");
  if (static_cast<int>(box.x.size()) != n || static_cast<int>(box.y.size()) != n) {
    throw std::invalid_argument("sample box must have n ranges for x and for y");
  }
  for (const auto& ranges : {box.x, box.y}) {
    for (const auto& [lo, hi] : ranges) {
      if (!(std::isfinite(lo) && std::isfinite(hi) && lo <= hi)) throw std::invalid_argument("bad sample box range");
    }
  }
  if (points == 0) throw std::invalid_argument("point count must be positive");
}

double Scenario::residual_tolerance() const {
  if (tolerance) return *tolerance;
  return engine.is_symbolic() ? kSymbolicTolerance : kFiniteDifferenceTolerance;
}

WeylStructure Scenario::weyl_structure() const { return WeylStructure(ConformalClass(metric), weyl_anchor); }

// ---------------------------------------------------------------------------

std::vector<PointTM> sample_points(const Scenario& s, std::size_t count, std::uint64_t seed) {
  const int n = s.dimension();
  std::mt19937_64 rng(seed);
  // Explicit 53-bit mapping: std::uniform_real_distribution is not
  // reproducible across standard libraries.
  auto uniform = [&rng](double lo, double hi) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return lo + u * (hi - lo);
  };

  std::vector<PointTM> points;
  points.reserve(count);
  const std::size_t max_attempts = 1000 * count + 1000;
  for (std::size_t attempt = 0; attempt < max_attempts && points.size() < count; ++attempt) {
    PointTM p(n);
    for (int i = 0; i < n; ++i) p.x[static_cast<std::size_t>(i)] = uniform(s.box.x[static_cast<std::size_t>(i)].first, s.box.x[static_cast<std::size_t>(i)].second);
    for (int i = 0; i < n; ++i) p.y[static_cast<std::size_t>(i)] = uniform(s.box.y[static_cast<std::size_t>(i)].first, s.box.y[static_cast<std::size_t>(i)].second);

    bool excluded = !s.metric.is_valid_at(p);
    for (const auto& e : s.exclusions.fields) {
      if (excluded) break;
      try {
        excluded = std::abs(e(p)) < s.exclusions.margin;
      } catch (const DomainError&) {
        excluded = true;
      }
    }
    if (!excluded) points.push_back(std::move(p));
  }
  if (points.size() < count) {
    throw std::runtime_error("sampling: only " + std::to_string(points.size()) + " of " + std::to_string(count) +
                             " points survived the exclusions");
  }
  return points;
}

std::vector<PointTM> sample_points(const Scenario& s) { return sample_points(s, s.points, s.seed); }

void CheckReport::finalize() {
  const bool bound_ok = bound == Bound::upper ? worst_residual <= tolerance : worst_residual >= tolerance;
  passed = bound_ok && std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.second; });
}

void WorstTracker::offer(double value, const PointTM& p, std::array<int, 3> index, std::optional<std::size_t> gauge) {
  const double mag = std::abs(value);
  if (!witness_ || mag > worst_ || std::isnan(mag)) {
    worst_ = std::isnan(mag) ? std::numeric_limits<double>::infinity() : mag;
    witness_ = Witness{p, index, gauge};
  }
}

void WorstTracker::offer(const Array3& values, const PointTM& p, std::optional<std::size_t> gauge) {
  const int n = values.dimension();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (int c = 0; c < n; ++c) offer(values(a, b, c), p, {a, b, c}, gauge);
    }
  }
}

// ---------------------------------------------------------------------------

CheckReport check_metric(const Scenario& s) {
  const auto points = sample_points(s);
  CheckReport r = make_report(s, "metric", 0.0, points.size());
  const SignatureReport sig = validate(s.metric, points);
  r.worst_residual = static_cast<double>(sig.violation_count);
  if (sig.first_violation) {
    r.witness = Witness{points[*sig.first_violation], {-1, -1, -1}, std::nullopt};
  } else {
    r.witness = Witness{points.front(), {-1, -1, -1}, std::nullopt};
  }
  r.metrics = {{"worst_symmetry_defect", sig.worst_symmetry_defect},
               {"min_abs_determinant", sig.min_abs_determinant},
               {"signature_positive", static_cast<double>(sig.reference.positive)},
               {"signature_negative", static_cast<double>(sig.reference.negative)}};
  r.conditions = {{"symmetric", sig.symmetric},
                  {"nondegenerate", sig.nondegenerate},
                  {"constant_signature", sig.constant_signature}};
  r.message = "residual counts sample points violating symmetry, non-degeneracy or constant signature " +
              to_string(sig.reference);
  r.finalize();
  return r;
}

namespace {

CheckReport metricity_report(const Scenario& s, const FinslerConnection& conn, std::string name) {
  const auto points = sample_points(s);
  CheckReport r = make_report(s, std::move(name), s.residual_tolerance(), points.size());
  WorstTracker worst;
  SymmetryDefects defects;
  for (const auto& p : points) {
    const ConnectionCoefficients c = conn.evaluate(p);
    worst.offer(h_cov_deriv_02(s.metric.field(), c.F, s.nonlinear.evaluate(p), p, s.engine), p);
    const SymmetryDefects d = symmetry_defects(c);
    defects.max_abs_vertical = std::max(defects.max_abs_vertical, d.max_abs_vertical);
    defects.max_h_asymmetry = std::max(defects.max_h_asymmetry, d.max_h_asymmetry);
    defects.max_v_asymmetry = std::max(defects.max_v_asymmetry, d.max_v_asymmetry);
  }
  take_worst(r, worst);
  r.metrics = {{"max_abs_C", defects.max_abs_vertical},
               {"max_F_asymmetry", defects.max_h_asymmetry},
               {"max_C_asymmetry", defects.max_v_asymmetry}};
  r.conditions = {{"horizontal", defects.horizontal()}, {"total_symmetric", defects.total_symmetric(kSymmetryTolerance)}};
  return r;
}

}  // namespace

CheckReport check_cr(const Scenario& s) {
  CheckReport r = metricity_report(s, chern_rund(s.metric, s.nonlinear, s.engine), "chern_rund");
  r.message = "max |g_{jk|i}| for the Chern-Rund connection";
  r.finalize();
  return r;
}

CheckReport check_cr_unnormalized(const Scenario& s, double min_residual) {
  CheckReport r =
      metricity_report(s, chern_rund_unnormalized(s.metric, s.nonlinear, s.engine), "chern_rund_unnormalized");
  r.bound = CheckReport::Bound::lower;
  r.tolerance = min_residual;
  r.conditions.clear();
  r.message = "max |g_{jk|i}| for the Chern-Rund formula without the 1/2 factor (expected to be large)";
  r.finalize();
  return r;
}

CheckReport check_compatibility(const Scenario& s) {
  const auto points = sample_points(s);
  const FinslerConnection conn = weyl_connection(s.metric, s.nonlinear, s.weyl_anchor, s.engine);
  CheckReport r = make_report(s, "compatibility", s.residual_tolerance(), points.size());
  WorstTracker worst;
  SymmetryDefects defects;
  for (const auto& p : points) {
    const ConnectionCoefficients c = conn.evaluate(p);
    const std::vector<double> w = evaluate(s.weyl_anchor, p);
    worst.offer(compatibility_residual(s.metric, c.F, s.nonlinear.evaluate(p), w, p, s.engine), p);
    const SymmetryDefects d = symmetry_defects(c);
    defects.max_abs_vertical = std::max(defects.max_abs_vertical, d.max_abs_vertical);
    defects.max_h_asymmetry = std::max(defects.max_h_asymmetry, d.max_h_asymmetry);
  }
  take_worst(r, worst);
  r.metrics = {{"max_abs_C", defects.max_abs_vertical}, {"max_F_asymmetry", defects.max_h_asymmetry}};
  r.conditions = {{"horizontal", defects.horizontal()}, {"h_symmetric", defects.h_symmetric(kSymmetryTolerance)}};
  r.message = "max |g_{jk|i} - w_i g_jk| for the Weyl-compatible connection";
  r.finalize();
  return r;
}

CheckReport check_conformal_invariance(const Scenario& s) {
  const auto points = sample_points(s);
  // Built once from the anchor (g0, w0); every gauge reuses these coefficients.
  const FinslerConnection conn = weyl_connection(s.metric, s.nonlinear, s.weyl_anchor, s.engine);
  CheckReport r = make_report(s, "conformal_invariance", s.residual_tolerance(), points.size());

  std::vector<GLMetric> scaled;
  std::vector<OneForm> forms;
  for (const auto& f : s.gauges) {
    scaled.push_back(conformal_scale(s.metric, f));
    forms.push_back(weyl_form(s.weyl_anchor, f, s.engine));
  }

  WorstTracker worst;
  for (const auto& p : points) {
    const Array3 F = conn.evaluate(p).F;
    const Eigen::MatrixXd N = s.nonlinear.evaluate(p);
    for (std::size_t k = 0; k < s.gauges.size(); ++k) {
      const std::vector<double> wbar = evaluate(forms[k], p);
      worst.offer(compatibility_residual(scaled[k], F, N, wbar, p, s.engine), p, k);
    }
  }
  take_worst(r, worst);
  r.metrics = {{"gauge_count", static_cast<double>(s.gauges.size())}};
  r.message = "max |gbar_{jk|i} - wbar_i gbar_jk| over gauges, connection fixed from the anchor";
  r.finalize();
  return r;
}

CheckReport check_vertical_failure(const Scenario& s) {
  const auto points = sample_points(s);
  const int n = s.dimension();
  CheckReport r = make_report(s, "vertical_failure", s.residual_tolerance(), points.size());

  WorstTracker mismatch;
  double max_defect = 0.0;
  double max_df = 0.0;
  for (std::size_t k = 0; k < s.gauges.size(); ++k) {
    const ScalarField& f = s.gauges[k];
    const GLMetric gbar = conformal_scale(s.metric, f);
    for (const auto& p : points) {
      const Array3 D = vertical_weyl_defect(s.metric, f, s.weyl_anchor, p, s.engine);
      max_defect = std::max(max_defect, D.max_abs());
      Array3 diff = D;
      for (int i = 0; i < n; ++i) {
        const double df = partial_x(f, i, p, s.engine);
        max_df = std::max(max_df, std::abs(df));
        for (int j = 0; j < n; ++j) {
          for (int kk = 0; kk < n; ++kk) diff(j, kk, i) += 2.0 * df * gbar(j, kk)(p);
        }
      }
      mismatch.offer(diff, p, k);
    }
  }
  take_worst(r, mismatch);
  const double tol = r.tolerance;
  r.metrics = {{"max_defect", max_defect}, {"max_abs_df", max_df}};
  r.conditions = {{"defect_nonzero_when_df_nonzero", max_df <= tol || max_defect > tol}};
  r.message = "max |D_jki + 2 (df/dx^i) gbar_jk|, D = gbar_jk|_i - wbar_i gbar_jk for a vertically compatible connection";
  r.finalize();
  return r;
}

CheckReport check_closedness(const Scenario& s) {
  const auto points = sample_points(s);
  const int n = s.dimension();
  CheckReport r = make_report(s, "closedness", closedness_tolerance(s), points.size());

  std::vector<OneForm> forms;
  for (const auto& f : s.gauges) forms.push_back(weyl_form(s.weyl_anchor, f, s.engine));

  WorstTracker worst;
  double max_dw0 = 0.0;
  for (const auto& p : points) {
    const Eigen::MatrixXd dw0 = exterior_derivative(s.weyl_anchor, p, s.engine);
    max_dw0 = std::max(max_dw0, dw0.cwiseAbs().maxCoeff());
    for (std::size_t k = 0; k < forms.size(); ++k) {
      const Eigen::MatrixXd diff = exterior_derivative(forms[k], p, s.engine) - dw0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) worst.offer(diff(i, j), p, {i, j, -1}, k);
      }
    }
  }
  take_worst(r, worst);
  r.metrics = {{"max_abs_dw0", max_dw0}};
  r.message = "max |d(wbar) - d(w0)| over gauges";
  r.finalize();
  return r;
}

std::optional<CheckReport> check_riemannian_reduction(const Scenario& s) {
  if (!s.metric.is_y_independent()) return std::nullopt;
  const auto points = sample_points(s);
  const int n = s.dimension();
  const NonlinearConnection N = canonical_N(s.metric, s.engine);
  const OneForm zero(static_cast<std::size_t>(n), ScalarField::constant(0.0));
  const FinslerConnection conn = weyl_connection(s.metric, N, zero, s.engine);
  CheckReport r = make_report(s, "riemannian_reduction", s.residual_tolerance(), points.size());

  WorstTracker worst;
  WorstTracker sensitivity;
  SymmetryDefects defects;
  for (const auto& p : points) {
    const ConnectionCoefficients c = conn.evaluate(p);
    Array3 diff = c.F;
    const Array3 gamma = levi_civita(s.metric, p, s.engine);
    for (std::size_t q = 0; q < diff.data().size(); ++q) diff.data()[q] -= gamma.data()[q];
    worst.offer(diff, p);
    const SymmetryDefects d = symmetry_defects(c);
    defects.max_abs_vertical = std::max(defects.max_abs_vertical, d.max_abs_vertical);
    defects.max_h_asymmetry = std::max(defects.max_h_asymmetry, d.max_h_asymmetry);

    for (int m = 0; m < n; ++m) {
      const double ym = p.y[static_cast<std::size_t>(m)];
      const double h = s.engine.step_for(ym);
      PointTM plus = p;
      PointTM minus = p;
      plus.y[static_cast<std::size_t>(m)] = ym + h;
      minus.y[static_cast<std::size_t>(m)] = ym - h;
      const Array3 Fp = conn.evaluate(plus).F;
      const Array3 Fm = conn.evaluate(minus).F;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          for (int k = 0; k < n; ++k) sensitivity.offer((Fp(i, j, k) - Fm(i, j, k)) / (2.0 * h), p, {i, j, k});
        }
      }
    }
  }
  take_worst(r, worst);
  r.metrics = {{"max_y_sensitivity", sensitivity.worst()},
               {"max_abs_C", defects.max_abs_vertical},
               {"max_F_asymmetry", defects.max_h_asymmetry}};
  r.conditions = {{"y_independent", sensitivity.worst() <= kReductionYSensitivityTolerance},
                  {"horizontal", defects.horizontal()},
                  {"h_symmetric", defects.h_symmetric(kSymmetryTolerance)}};
  r.message = "max |F^i_jk - Gamma^i_jk| with w = 0 and the canonical nonlinear connection";
  r.finalize();
  return r;
}

CheckReport uniqueness_probe(const Scenario& s, double epsilon) {
  const auto points = sample_points(s);
  const FinslerConnection conn = weyl_connection(s.metric, s.nonlinear, s.weyl_anchor, s.engine);
  CheckReport r = make_report(s, "uniqueness_probe", kUniquenessMinSlope * epsilon, points.size());
  r.bound = CheckReport::Bound::lower;

  WorstTracker worst;
  for (const auto& p : points) {
    Array3 F = conn.evaluate(p).F;
    F(0, 0, 0) += epsilon;  // symmetric slot: h-symmetry and C = 0 are kept
    worst.offer(compatibility_residual(s.metric, F, s.nonlinear.evaluate(p), evaluate(s.weyl_anchor, p), p, s.engine),
                p);
  }
  take_worst(r, worst);
  r.metrics = {{"epsilon", epsilon}, {"kappa", epsilon > 0.0 ? worst.worst() / epsilon : 0.0}};
  r.message = "compatibility residual induced by F^1_11 += epsilon";
  r.finalize();
  return r;
}

CheckReport check_uniqueness(const Scenario& s) {
  const CheckReport small = uniqueness_probe(s, 1e-4);
  CheckReport r = uniqueness_probe(s, 1e-3);
  const double ratio = small.worst_residual > 0.0 ? r.worst_residual / small.worst_residual : 0.0;
  r.metrics.emplace_back("residual_at_1e-4", small.worst_residual);
  r.metrics.emplace_back("scaling_ratio", ratio);
  r.conditions = {{"responds_at_1e-4", small.passed},
                  {"linear_scaling", std::abs(ratio / 10.0 - 1.0) <= kUniquenessLinearityTolerance}};
  r.message = "residual >= 0.1 * epsilon at epsilon = 1e-3, ratio to epsilon = 1e-4 within 5% of 10";
  r.finalize();
  return r;
}

// ---------------------------------------------------------------------------

std::vector<CheckReport> run_all_checks(const Scenario& s) {
  std::vector<CheckReport> reports;
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      CheckReport r = make_report(s, name, s.residual_tolerance(), s.points);
      r.passed = false;
      r.worst_residual = std::numeric_limits<double>::infinity();
      r.message = std::string("error: ") + e.what();
      reports.push_back(std::move(r));
    }
  };
  guarded("metric", [&] { reports.push_back(check_metric(s)); });
  guarded("chern_rund", [&] { reports.push_back(check_cr(s)); });
  guarded("compatibility", [&] { reports.push_back(check_compatibility(s)); });
  guarded("conformal_invariance", [&] { reports.push_back(check_conformal_invariance(s)); });
  guarded("vertical_failure", [&] { reports.push_back(check_vertical_failure(s)); });
  guarded("closedness", [&] { reports.push_back(check_closedness(s)); });
  guarded("riemannian_reduction", [&] {
    if (auto r = check_riemannian_reduction(s)) reports.push_back(std::move(*r));
  });
  guarded("uniqueness_probe", [&] { reports.push_back(check_uniqueness(s)); });
  return reports;
}

}  // namespace glweyl
