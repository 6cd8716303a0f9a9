#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "glweyl/metric.hpp"
#include "helpers.hpp"

using namespace glweyl;
using testing_support::field;
using testing_support::point;

namespace {

const DerivativeEngine kSym = DerivativeEngine::symbolic();

GLMetric diag(const std::string& a, const std::string& b) {
  return GLMetric::symmetric(2, {field(a), field("0"), field("0"), field(b)});
}

std::vector<PointTM> grid(double lo, double hi, int count) {
  std::vector<PointTM> pts;
  for (int k = 0; k < count; ++k) {
    const double t = lo + (hi - lo) * (k + 0.5) / count;
    pts.push_back(point({t, 0.3 * t}, {0.1, -0.2}));
  }
  return pts;
}

}  // namespace

TEST(Validate, EuclideanIsPositiveDefinite) {
  const auto pts = grid(-1, 1, 10);
  const auto r = validate(diag("1", "1"), pts);
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.reference, (Signature{2, 0}));
  for (const auto& d : r.points) EXPECT_DOUBLE_EQ(d.determinant, 1.0);
}

TEST(Validate, SphereAwayFromPoles) {
  const auto r = validate(diag("1", "sin(x1)^2"), grid(0.3, 2.8, 20));
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.reference, (Signature{2, 0}));
}

TEST(Validate, SignChangeBreaksConstantSignature) {
  const auto r = validate(diag("1", "x1"), grid(-1, 1, 20));
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.constant_signature);
  EXPECT_TRUE(r.symmetric);
  ASSERT_TRUE(r.first_violation.has_value());
  EXPECT_EQ(r.violation_count, 10u);
}

TEST(Validate, AsymmetryAndDegeneracy) {
  const GLMetric asym(DTensorField(2, 0, 2, {field("1"), field("0.5"), field("0"), field("1")}));
  EXPECT_FALSE(validate(asym, grid(0, 1, 3)).symmetric);
  const GLMetric degenerate = diag("1", "0*x1");
  EXPECT_FALSE(validate(degenerate, grid(0, 1, 3)).nondegenerate);
  EXPECT_THROW(validate(diag("1", "1"), std::vector<PointTM>{}), std::invalid_argument);
}

TEST(Validate, DeclaredSignatureIsTheReference) {
  const GLMetric g(DTensorField(2, 0, 2, {field("1"), field("0"), field("0"), field("1")}), Signature{1, 1});
  EXPECT_FALSE(validate(g, grid(0, 1, 2)).passed());
  EXPECT_THROW(GLMetric(DTensorField::zero(2, 0, 2), Signature{2, 1}), std::invalid_argument);
}

TEST(Inverse, Examples) {
  EXPECT_TRUE(inverse(diag("1", "1"), PointTM(2)).isIdentity(0.0));
  const GLMetric sphere = diag("1", "sin(x1)^2");
  const auto a = inverse(sphere, point({std::numbers::pi / 2, 0}, {0, 0}));
  EXPECT_NEAR(a(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(a(1, 1), 1.0, 1e-15);
  const auto b = inverse(sphere, point({std::numbers::pi / 6, 0}, {0, 0}));
  EXPECT_NEAR(b(1, 1), 4.0, 1e-12);
  EXPECT_THROW(inverse(sphere, PointTM(2)), SingularMetricError);
}

TEST(Inverse, ResidualScalesWithConditionNumber) {
  const GLMetric g = GLMetric::symmetric(2, {field("2 + x1^2"), field("x1*y2"), field("0"), field("1 + y1^2")});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 50; ++k) {
    const auto p = point({u(rng), u(rng)}, {u(rng), u(rng)});
    const Eigen::MatrixXd m = g.evaluate(p);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
    const double cond = svd.singularValues()(0) / svd.singularValues()(1);
    EXPECT_LE((inverse(g, p) * m - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff(), 1e-12 * cond);
  }
}

TEST(ConformalScale, Examples) {
  const GLMetric g = diag("1", "1");
  const auto p0 = point({0, 0.5}, {0, 0});
  EXPECT_TRUE(conformal_scale(g, field("0")).evaluate(p0).isApprox(g.evaluate(p0)));
  EXPECT_TRUE(conformal_scale(g, field("0.3*x1")).evaluate(p0).isIdentity(1e-15));
  EXPECT_NEAR(conformal_scale(g, field("0.3*x1")).evaluate(point({1, 0}, {0, 0}))(0, 0), 1.8221188, 1e-7);
  EXPECT_THROW(conformal_scale(g, field("y1")), std::invalid_argument);
}

TEST(ConformalScale, RoundTripWithOppositeGauge) {
  const GLMetric g = GLMetric::symmetric(2, {field("1 + x1^2 + y1^2"), field("0.1*x2"), field("0"), field("2 + y2^2")});
  const ScalarField f = field("0.4*sin(x1*x2)");
  const GLMetric back = conformal_scale(conformal_scale(g, f), -1.0 * f);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 64; ++k) {
    const auto p = point({u(rng), u(rng)}, {u(rng), u(rng)});
    EXPECT_LE((back.evaluate(p) - g.evaluate(p)).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(WeylForm, Examples) {
  const OneForm w0{field("x2"), field("0")};
  const auto p = point({3, 1.5}, {0, 0});
  const OneForm same = weyl_form(w0, field("0"), kSym);
  EXPECT_DOUBLE_EQ(same[0](p), 1.5);
  EXPECT_DOUBLE_EQ(same[1](p), 0.0);

  const OneForm dx = weyl_form(OneForm{field("0"), field("0")}, field("x1"), kSym);
  EXPECT_DOUBLE_EQ(dx[0](p), 2.0);
  EXPECT_DOUBLE_EQ(dx[1](p), 0.0);

  const OneForm quad = weyl_form(w0, field("0.5*x1*x1"), kSym);
  EXPECT_DOUBLE_EQ(quad[0](p), 1.5 + 6.0);
  EXPECT_THROW(weyl_form(w0, field("y1"), kSym), std::invalid_argument);
}

TEST(WeylStructure, RejectsFiberDependentForms) {
  const ConformalClass cls(diag("1", "1"));
  EXPECT_THROW(WeylStructure(cls, OneForm{field("y1"), field("0")}), std::invalid_argument);
  EXPECT_THROW(WeylStructure(cls, OneForm{field("0")}), std::invalid_argument);
  const WeylStructure W(cls, OneForm{field("0.4"), field("0")});
  EXPECT_DOUBLE_EQ(weyl_form(W, field("x2"), kSym)[1](PointTM(2)), 2.0);
}

TEST(RaiseIndex, Examples) {
  const auto p = point({std::numbers::pi / 6, 0}, {0, 0});
  EXPECT_EQ(raise_index(OneForm{field("1"), field("2")}, diag("1", "1"), p), (std::vector<double>{1, 2}));
  const auto r = raise_index(OneForm{field("0"), field("8")}, diag("1", "4"), p);
  EXPECT_DOUBLE_EQ(r[1], 2.0);
  const auto s = raise_index(OneForm{field("0"), field("1")}, diag("1", "sin(x1)^2"), p);
  EXPECT_NEAR(s[1], 4.0, 1e-12);
}

TEST(RaiseIndex, LowerRecoversForm) {
  const GLMetric g = GLMetric::symmetric(2, {field("2 + x1^2"), field("0.3*y1"), field("0"), field("1 + y2^2")});
  const OneForm w{field("sin(x1)"), field("x1*x2 - 1")};
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int k = 0; k < 64; ++k) {
    const auto p = point({u(rng), u(rng)}, {u(rng), u(rng)});
    const auto up = raise_index(w, g, p);
    const auto down = lower_index(up, g, p);
    const auto direct = evaluate(w, p);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(down[i], direct[i], 1e-10);
  }
}

TEST(ExteriorDerivative, GaugeChangesLeaveItInvariant) {
  const OneForm w0{field("-x2"), field("x1")};
  const auto p = point({0.2, -0.7}, {0, 0});
  const auto d0 = exterior_derivative(w0, p, kSym);
  EXPECT_DOUBLE_EQ(d0(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(d0(1, 0), -2.0);
  for (const char* f : {"x1*x2", "sin(x1)*cos(x2)", "exp(0.5*x1)"}) {
    const auto d = exterior_derivative(weyl_form(w0, field(f), kSym), p, kSym);
    EXPECT_LE((d - d0).cwiseAbs().maxCoeff(), 1e-12) << f;
    const auto dfd = exterior_derivative(weyl_form(w0, field(f), DerivativeEngine::central_fd()), p,
                                         DerivativeEngine::central_fd());
    EXPECT_LE((dfd - d0).cwiseAbs().maxCoeff(), 1e-6) << f;
  }
}
