#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "glweyl/verify.hpp"
#include "helpers.hpp"

using namespace glweyl;
using testing_support::catalog_scenario;
using testing_support::field;

namespace {

const char* const kCatalog[] = {"euclidean", "sphere", "euclid-weyl", "gl-quadratic"};

Scenario signature_violation() {
  Scenario s("diag-1-x1", GLMetric::symmetric(2, {field("1"), field("0"), field("0"), field("x1")}),
             NonlinearConnection::zero(2), OneForm{field("0"), field("0")});
  s.box.x = {{-1, 1}, {-1, 1}};
  s.box.y = {{-1, 1}, {-1, 1}};
  return s;
}

}  // namespace

TEST(Sampling, DeterministicAndInsideBox) {
  const Scenario s = catalog_scenario("sphere");
  const auto a = sample_points(s);
  const auto b = sample_points(s);
  ASSERT_EQ(a.size(), 64u);
  EXPECT_EQ(a, b);
  for (const auto& p : a) {
    EXPECT_GE(p.x[0], 0.3);
    EXPECT_LE(p.x[0], 2.8);
    EXPECT_GE(std::abs(std::sin(p.x[0])), 1e-3);
  }
  EXPECT_NE(sample_points(s, 64, 43), a);
}

TEST(Sampling, ExclusionsRejectPoints) {
  Scenario s = catalog_scenario("euclidean");
  s.exclusions.fields = {field("x1 - 0.5")};
  s.exclusions.margin = 0.4;
  for (const auto& p : sample_points(s)) EXPECT_GE(std::abs(p.x[0] - 0.5), 0.4);
  s.exclusions.margin = 10.0;
  EXPECT_THROW(sample_points(s), std::runtime_error);
}

TEST(Scenario, ConsistencyRejectsBadInputs) {
  Scenario s = catalog_scenario("euclidean");
  s.gauges.push_back(field("y1"));
  s.gauge_labels.push_back("y1");
  EXPECT_THROW(s.check_consistency(), std::invalid_argument);
  Scenario t = catalog_scenario("euclidean");
  t.box.x.pop_back();
  EXPECT_THROW(t.check_consistency(), std::invalid_argument);
}

TEST(Scenario, ToleranceFollowsEngine) {
  Scenario s = catalog_scenario("euclidean");
  EXPECT_EQ(s.residual_tolerance(), kSymbolicTolerance);
  s.engine = DerivativeEngine::central_fd();
  EXPECT_EQ(s.residual_tolerance(), kFiniteDifferenceTolerance);
  s.tolerance = 0.5;
  EXPECT_EQ(s.residual_tolerance(), 0.5);
}

TEST(CheckMetric, Catalog) {
  for (const char* name : kCatalog) EXPECT_TRUE(check_metric(catalog_scenario(name)).passed) << name;
}

TEST(CheckMetric, SignatureViolation) {
  const auto r = check_metric(signature_violation());
  EXPECT_FALSE(r.passed);
  EXPECT_GT(r.worst_residual, 0.0);
  ASSERT_TRUE(r.witness.has_value());
}

TEST(CheckCr, FlatIsExactAndCatalogPasses) {
  EXPECT_EQ(check_cr(catalog_scenario("euclidean")).worst_residual, 0.0);
  for (const char* name : kCatalog) {
    EXPECT_TRUE(check_cr(catalog_scenario(name)).passed) << name;
    EXPECT_TRUE(check_cr(catalog_scenario(name, "fd")).passed) << name;
  }
}

TEST(CheckCr, UnnormalizedVariantFailsMetricityOnSphere) {
  const auto r = check_cr_unnormalized(catalog_scenario("sphere"));
  EXPECT_TRUE(r.passed);
  EXPECT_GT(r.worst_residual, 1e-2);
  EXPECT_EQ(r.bound, CheckReport::Bound::lower);
}

TEST(CheckCompatibility, ZeroFormMatchesCr) {
  const Scenario s = catalog_scenario("sphere");
  EXPECT_EQ(check_compatibility(s).worst_residual, check_cr(s).worst_residual);
}

TEST(CheckCompatibility, ConstantFormAndFullScenario) {
  EXPECT_LT(check_compatibility(catalog_scenario("euclid-weyl")).worst_residual, 1e-12);
  EXPECT_LT(check_compatibility(catalog_scenario("gl-quadratic")).worst_residual, 1e-9);
}

TEST(CheckConformalInvariance, Gauges) {
  Scenario s = catalog_scenario("euclidean");
  s.gauges = {field("0")};
  s.gauge_labels = {"0"};
  EXPECT_EQ(check_conformal_invariance(s).worst_residual, check_compatibility(s).worst_residual);
  s.gauges = {field("0.3*x1")};
  s.gauge_labels = {"0.3*x1"};
  EXPECT_LT(check_conformal_invariance(s).worst_residual, 1e-9);

  Scenario sphere = catalog_scenario("sphere");
  sphere.gauges = {field("sin(x2)")};
  sphere.gauge_labels = {"sin(x2)"};
  EXPECT_LT(check_conformal_invariance(sphere).worst_residual, 1e-8);
}

TEST(CheckVerticalFailure, ClosedFormAndNonvanishing) {
  Scenario s = catalog_scenario("euclidean");
  s.gauges = {field("0")};
  s.gauge_labels = {"0"};
  EXPECT_TRUE(check_vertical_failure(s).passed);
  s.gauges = {field("x1")};
  s.gauge_labels = {"x1"};
  const auto r = check_vertical_failure(s);
  EXPECT_TRUE(r.passed);
  EXPECT_LT(r.worst_residual, 1e-9);
}

TEST(CheckClosedness, SymbolicFdAndRotationForm) {
  for (const char* name : kCatalog) {
    EXPECT_LE(check_closedness(catalog_scenario(name)).worst_residual, 1e-12) << name;
    EXPECT_LE(check_closedness(catalog_scenario(name, "fd")).worst_residual, 1e-6) << name;
  }
  Scenario s = catalog_scenario("euclidean");
  s.weyl_anchor = {field("-x2"), field("x1")};
  s.gauges = {field("0"), field("x1*x2"), field("sin(x1)")};
  s.gauge_labels = {"0", "x1*x2", "sin(x1)"};
  EXPECT_TRUE(check_closedness(s).passed);
  const auto d = exterior_derivative(s.weyl_anchor, PointTM(2), s.engine);
  EXPECT_DOUBLE_EQ(d(0, 1), 2.0);
}

TEST(CheckRiemannianReduction, AppliesOnlyToFiberIndependentMetrics) {
  const auto e = check_riemannian_reduction(catalog_scenario("euclidean"));
  ASSERT_TRUE(e.has_value());
  EXPECT_EQ(e->worst_residual, 0.0);
  const auto s = check_riemannian_reduction(catalog_scenario("sphere"));
  ASSERT_TRUE(s.has_value());
  EXPECT_TRUE(s->passed);
  EXPECT_FALSE(check_riemannian_reduction(catalog_scenario("gl-quadratic")).has_value());
}

TEST(UniquenessProbe, ZeroPerturbationLeavesResidual) {
  const Scenario s = catalog_scenario("euclid-weyl");
  const auto r = uniqueness_probe(s, 0.0);
  EXPECT_EQ(r.worst_residual, check_compatibility(s).worst_residual);
}

TEST(UniquenessProbe, LinearResponse) {
  const Scenario s = catalog_scenario("euclid-weyl");
  const double big = uniqueness_probe(s, 1e-3).worst_residual;
  const double small = uniqueness_probe(s, 1e-4).worst_residual;
  EXPECT_GE(big, 1e-4);
  EXPECT_NEAR(big / small, 10.0, 0.5);
  for (const char* name : kCatalog) EXPECT_TRUE(check_uniqueness(catalog_scenario(name)).passed) << name;
}

TEST(RunAllChecks, FixedOrderAndDeterministic) {
  const Scenario s = catalog_scenario("gl-quadratic");
  const auto a = run_all_checks(s);
  const auto b = run_all_checks(s);
  ASSERT_EQ(a.size(), b.size());
  std::vector<std::string> names;
  for (std::size_t k = 0; k < a.size(); ++k) {
    names.push_back(a[k].name);
    EXPECT_EQ(a[k].worst_residual, b[k].worst_residual);
    EXPECT_TRUE(a[k].passed) << a[k].name;
    EXPECT_EQ(a[k].point_count, 64u);
    EXPECT_EQ(a[k].seed, 42u);
    EXPECT_FALSE(a[k].domain.empty());
  }
  EXPECT_EQ(names, (std::vector<std::string>{"metric", "chern_rund", "compatibility", "conformal_invariance",
                                             "vertical_failure", "closedness", "uniqueness_probe"}));
}

TEST(RunAllChecks, FailingWitnessReproducesStandalone) {
  // Tolerance zero turns rounding noise into a failure; re-evaluating at the
  // witness must give the same residual bit for bit.
  Scenario s = catalog_scenario("sphere");
  s.tolerance = 0.0;
  const auto r = check_cr(s);
  ASSERT_FALSE(r.passed);
  ASSERT_TRUE(r.witness.has_value());
  const auto& w = *r.witness;
  const Array3 F = chern_rund(s.metric, s.nonlinear, s.engine).evaluate(w.point).F;
  const Array3 R = h_cov_deriv_02(s.metric.field(), F, s.nonlinear.evaluate(w.point), w.point, s.engine);
  EXPECT_EQ(std::abs(R(w.index[0], w.index[1], w.index[2])), r.worst_residual);
}

TEST(RunAllChecks, ErrorsBecomeFailedReports) {
  Scenario s = catalog_scenario("euclidean");
  s.exclusions.fields = {field("1")};
  s.exclusions.margin = 5.0;
  const auto reports = run_all_checks(s);
  ASSERT_FALSE(reports.empty());
  for (const auto& r : reports) {
    EXPECT_FALSE(r.passed);
    EXPECT_NE(r.message.find("error"), std::string::npos);
  }
}
