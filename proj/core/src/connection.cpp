#include "glweyl/connection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glweyl {

namespace {

std::size_t slot(int a, int b, int n) { return static_cast<std::size_t>(a * n + b); }

void require_point(const PointTM& p, int n) {
  if (p.dimension() != n || static_cast<int>(p.y.size()) != n) {
    throw std::invalid_argument("point dimension " + std::to_string(p.dimension()) + " does not match n = " +
                                std::to_string(n));
  }
}

/// D(b, c, d) = delta g_bc / delta x^d, computed on the upper triangle and
/// mirrored so that D is exactly symmetric in (b, c).
Array3 delta_metric(const GLMetric& g, const Eigen::MatrixXd& N, const PointTM& p, const DerivativeEngine& eng) {
  const int n = g.dimension();
  Array3 D(n);
  for (int b = 0; b < n; ++b) {
    for (int c = b; c < n; ++c) {
      for (int d = 0; d < n; ++d) {
        const double v = delta_x(g(b, c), d, p, N, eng);
        D(b, c, d) = v;
        D(c, b, d) = v;
      }
    }
  }
  return D;
}

/// V(b, c, d) = d g_bc / d y^d, mirrored in (b, c).
Array3 vertical_metric_derivative(const GLMetric& g, const PointTM& p, const DerivativeEngine& eng) {
  const int n = g.dimension();
  Array3 V(n);
  for (int b = 0; b < n; ++b) {
    for (int c = b; c < n; ++c) {
      for (int d = 0; d < n; ++d) {
        const double v = partial_y(g(b, c), d, p, eng);
        V(b, c, d) = v;
        V(c, b, d) = v;
      }
    }
  }
  return V;
}

/// scale * g^{ia} (T(a,k,j) + T(j,a,k) - T(j,k,a)), the common Christoffel
/// pattern for T(b, c, d) = derivative of g_bc along direction d.
Array3 christoffel_pattern(const Eigen::MatrixXd& ginv, const Array3& T, double scale) {
  const int n = T.dimension();
  Array3 out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        double sum = 0.0;
        for (int a = 0; a < n; ++a) sum += ginv(i, a) * (T(a, k, j) + T(j, a, k) - T(j, k, a));
        out(i, j, k) = scale * sum;
        out(i, k, j) = scale * sum;
      }
    }
  }
  return out;
}

/// Subtracts 1/2 (delta^i_j w_k + delta^i_k w_j - g_jk w^i) in place.
void apply_weyl_correction(Array3& coeffs, const Eigen::MatrixXd& gm, std::span<const double> w,
                           std::span<const double> w_up) {
  const int n = coeffs.dimension();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        double correction = -gm(j, k) * w_up[static_cast<std::size_t>(i)];
        if (i == j) correction += w[static_cast<std::size_t>(k)];
        if (i == k) correction += w[static_cast<std::size_t>(j)];
        const double v = coeffs(i, j, k) - 0.5 * correction;
        coeffs(i, j, k) = v;
        coeffs(i, k, j) = v;
      }
    }
  }
}

void require_x_only(const OneForm& w, int n, const char* who) {
  if (static_cast<int>(w.size()) != n) {
    throw std::invalid_argument(std::string(who) + ": one-form has " + std::to_string(w.size()) +
                                " components, expected " + std::to_string(n));
  }
  for (const auto& c : w) {
    if (!c.is_x_only()) throw std::invalid_argument(std::string(who) + ": one-form components must depend on x only");
  }
}

FinslerConnection chern_rund_scaled(const GLMetric& g, const NonlinearConnection& N, const DerivativeEngine& eng,
                                    double scale) {
  if (N.dimension() != g.dimension()) throw std::invalid_argument("chern_rund: dimension mismatch");
  const int n = g.dimension();
  return FinslerConnection(n, [g, N, eng, scale, n](const PointTM& p) {
    require_point(p, n);
    const Eigen::MatrixXd Np = N.evaluate(p);
    const Eigen::MatrixXd ginv = inverse(g, p);
    return ConnectionCoefficients{christoffel_pattern(ginv, delta_metric(g, Np, p, eng), scale), Array3(n)};
  });
}

}  // namespace

// ---------------------------------------------------------------------------

NonlinearConnection::NonlinearConnection(int n, std::vector<ScalarField> entries) : n_(n), entries_(std::move(entries)) {
  if (n < 1 || entries_.size() != slot(n, 0, n)) {
    throw std::invalid_argument("NonlinearConnection: expected n*n coefficient fields");
  }
}

NonlinearConnection::NonlinearConnection(int n, MatrixFunction evaluator) : n_(n), evaluator_(std::move(evaluator)) {
  if (n < 1 || !evaluator_) throw std::invalid_argument("NonlinearConnection: bad evaluator");
}

NonlinearConnection NonlinearConnection::zero(int n) {
  return NonlinearConnection(n, std::vector<ScalarField>(slot(n, 0, n)));
}

Eigen::MatrixXd NonlinearConnection::evaluate(const PointTM& p) const {
  if (evaluator_) {
    Eigen::MatrixXd m = evaluator_(p);
    if (m.rows() != n_ || m.cols() != n_) throw std::logic_error("NonlinearConnection: evaluator returned wrong shape");
    return m;
  }
  Eigen::MatrixXd m(n_, n_);
  for (int j = 0; j < n_; ++j) {
    for (int i = 0; i < n_; ++i) m(j, i) = entries_[slot(j, i, n_)](p);
  }
  return m;
}

ScalarField NonlinearConnection::coefficient(int j, int i) const {
  if (j < 0 || j >= n_ || i < 0 || i >= n_) throw std::out_of_range("NonlinearConnection::coefficient");
  if (!evaluator_) return entries_[slot(j, i, n_)];
  return ScalarField([eval = evaluator_, j, i](const PointTM& p) { return eval(p)(j, i); }, false);
}

FinslerConnection::FinslerConnection(int n, Evaluator evaluator) : n_(n), evaluator_(std::move(evaluator)) {
  if (n < 1 || !evaluator_) throw std::invalid_argument("FinslerConnection: bad evaluator");
}

FinslerConnection FinslerConnection::from_fields(int n, std::vector<ScalarField> F, std::vector<ScalarField> C) {
  const auto count = static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (F.size() != count || C.size() != count) throw std::invalid_argument("FinslerConnection: expected n^3 fields each");
  return FinslerConnection(n, [F = std::move(F), C = std::move(C), n](const PointTM& p) {
    ConnectionCoefficients out{Array3(n), Array3(n)};
    for (std::size_t s = 0; s < F.size(); ++s) {
      out.F.data()[s] = F[s](p);
      out.C.data()[s] = C[s](p);
    }
    return out;
  });
}

ConnectionCoefficients FinslerConnection::evaluate(const PointTM& p) const { return evaluator_(p); }

SymmetryDefects symmetry_defects(const ConnectionCoefficients& c) {
  SymmetryDefects d;
  const int n = c.F.dimension();
  d.max_abs_vertical = c.C.max_abs();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        d.max_h_asymmetry = std::max(d.max_h_asymmetry, std::abs(c.F(i, j, k) - c.F(i, k, j)));
        d.max_v_asymmetry = std::max(d.max_v_asymmetry, std::abs(c.C(i, j, k) - c.C(i, k, j)));
      }
    }
  }
  return d;
}

SymmetryDefects symmetry_defects(const FinslerConnection& conn, std::span<const PointTM> points) {
  SymmetryDefects total;
  for (const auto& p : points) {
    const SymmetryDefects d = symmetry_defects(conn.evaluate(p));
    total.max_abs_vertical = std::max(total.max_abs_vertical, d.max_abs_vertical);
    total.max_h_asymmetry = std::max(total.max_h_asymmetry, d.max_h_asymmetry);
    total.max_v_asymmetry = std::max(total.max_v_asymmetry, d.max_v_asymmetry);
  }
  return total;
}

// ---------------------------------------------------------------------------

double delta_x(const ScalarField& f, int i, const PointTM& p, const Eigen::MatrixXd& N_at_p,
               const DerivativeEngine& eng) {
  double value = partial_x(f, i, p, eng);
  if (f.is_x_only()) return value;
  for (int j = 0; j < N_at_p.rows(); ++j) {
    const double coeff = N_at_p(j, i);
    if (coeff != 0.0) value -= coeff * partial_y(f, j, p, eng);
  }
  return value;
}

double delta_x(const ScalarField& f, int i, const PointTM& p, const NonlinearConnection& N,
               const DerivativeEngine& eng) {
  if (i < 0 || i >= N.dimension()) throw std::out_of_range("delta_x: index");
  return delta_x(f, i, p, N.evaluate(p), eng);
}

Array3 h_cov_deriv_02(const DTensorField& t, const Array3& F, const Eigen::MatrixXd& N_at_p, const PointTM& p,
                      const DerivativeEngine& eng) {
  if (t.upper() != 0 || t.lower() != 2) throw std::invalid_argument("h_cov_deriv_02: valence must be (0,2)");
  const int n = t.dimension();
  Eigen::MatrixXd tv(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) tv(a, b) = t(a, b)(p);
  }
  Array3 out(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        double v = delta_x(t(j, k), i, p, N_at_p, eng);
        for (int a = 0; a < n; ++a) v -= tv(a, k) * F(a, j, i) + tv(j, a) * F(a, k, i);
        out(j, k, i) = v;
      }
    }
  }
  return out;
}

Array3 h_cov_deriv_02(const DTensorField& t, const FinslerConnection& conn, const NonlinearConnection& N,
                      const PointTM& p, const DerivativeEngine& eng) {
  return h_cov_deriv_02(t, conn.evaluate(p).F, N.evaluate(p), p, eng);
}

Array3 v_cov_deriv_02(const DTensorField& t, const Array3& C, const PointTM& p, const DerivativeEngine& eng) {
  if (t.upper() != 0 || t.lower() != 2) throw std::invalid_argument("v_cov_deriv_02: valence must be (0,2)");
  const int n = t.dimension();
  Eigen::MatrixXd tv(n, n);
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) tv(a, b) = t(a, b)(p);
  }
  Array3 out(n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        double v = partial_y(t(j, k), i, p, eng);
        for (int a = 0; a < n; ++a) v -= tv(a, k) * C(a, j, i) + tv(j, a) * C(a, k, i);
        out(j, k, i) = v;
      }
    }
  }
  return out;
}

Array3 v_cov_deriv_02(const DTensorField& t, const FinslerConnection& conn, const PointTM& p,
                      const DerivativeEngine& eng) {
  return v_cov_deriv_02(t, conn.evaluate(p).C, p, eng);
}

// ---------------------------------------------------------------------------

FinslerConnection chern_rund(const GLMetric& g, const NonlinearConnection& N, const DerivativeEngine& eng) {
  return chern_rund_scaled(g, N, eng, 0.5);
}

FinslerConnection chern_rund_unnormalized(const GLMetric& g, const NonlinearConnection& N,
                                          const DerivativeEngine& eng) {
  return chern_rund_scaled(g, N, eng, 1.0);
}

FinslerConnection weyl_connection(const GLMetric& g, const NonlinearConnection& N, const OneForm& w,
                                  const DerivativeEngine& eng) {
  const int n = g.dimension();
  if (N.dimension() != n) throw std::invalid_argument("weyl_connection: dimension mismatch");
  require_x_only(w, n, "weyl_connection");
  return FinslerConnection(n, [g, N, w, eng, n](const PointTM& p) {
    require_point(p, n);
    const Eigen::MatrixXd Np = N.evaluate(p);
    const Eigen::MatrixXd gm = g.evaluate(p);
    const Eigen::MatrixXd ginv = inverse(g, p);
    Array3 F = christoffel_pattern(ginv, delta_metric(g, Np, p, eng), 0.5);
    const std::vector<double> w_low = evaluate(w, p);
    const Eigen::VectorXd w_up = ginv * Eigen::Map<const Eigen::VectorXd>(w_low.data(), n);
    apply_weyl_correction(F, gm, w_low, std::span<const double>(w_up.data(), static_cast<std::size_t>(n)));
    return ConnectionCoefficients{std::move(F), Array3(n)};
  });
}

CoefficientField vertical_cartan(const GLMetric& g, const DerivativeEngine& eng) {
  const int n = g.dimension();
  return [g, eng, n](const PointTM& p) {
    require_point(p, n);
    if (g.is_y_independent()) return Array3(n);
    return christoffel_pattern(inverse(g, p), vertical_metric_derivative(g, p, eng), 0.5);
  };
}

CoefficientField vertical_weyl_cartan(const GLMetric& g, const OneForm& w, const DerivativeEngine& eng) {
  const int n = g.dimension();
  require_x_only(w, n, "vertical_weyl_cartan");
  return [g, w, eng, n, cartan = vertical_cartan(g, eng)](const PointTM& p) {
    Array3 C = cartan(p);
    const Eigen::MatrixXd gm = g.evaluate(p);
    const std::vector<double> w_low = evaluate(w, p);
    const Eigen::VectorXd w_up = inverse(g, p) * Eigen::Map<const Eigen::VectorXd>(w_low.data(), n);
    apply_weyl_correction(C, gm, w_low, std::span<const double>(w_up.data(), static_cast<std::size_t>(n)));
    return C;
  };
}

Array3 vertical_weyl_defect(const GLMetric& g, const ScalarField& gauge, const OneForm& w, const PointTM& p,
                            const DerivativeEngine& eng) {
  const int n = g.dimension();
  const Array3 C = vertical_weyl_cartan(g, w, eng)(p);
  const GLMetric gbar = conformal_scale(g, gauge);
  const std::vector<double> wbar = evaluate(weyl_form(w, gauge, eng), p);
  Array3 D = v_cov_deriv_02(gbar.field(), C, p, eng);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double gjk = gbar(j, k)(p);
      for (int i = 0; i < n; ++i) D(j, k, i) -= wbar[static_cast<std::size_t>(i)] * gjk;
    }
  }
  return D;
}

Array3 levi_civita(const GLMetric& g, const PointTM& p, const DerivativeEngine& eng) {
  if (!g.is_y_independent()) throw std::invalid_argument("levi_civita: metric depends on y");
  const int n = g.dimension();
  require_point(p, n);
  const Eigen::MatrixXd ginv = inverse(g, p);
  // dg(b, c, d) = d g_bc / d x^d
  Array3 dg(n);
  for (int b = 0; b < n; ++b) {
    for (int c = b; c < n; ++c) {
      for (int d = 0; d < n; ++d) {
        dg(b, c, d) = partial_x(g(b, c), d, p, eng);
        dg(c, b, d) = dg(b, c, d);
      }
    }
  }
  Array3 gamma(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      for (int k = j; k < n; ++k) {
        double sum = 0.0;
        for (int a = 0; a < n; ++a) sum += ginv(i, a) * (dg(a, k, j) + dg(j, a, k) - dg(j, k, a));
        gamma(i, j, k) = 0.5 * sum;
        gamma(i, k, j) = 0.5 * sum;
      }
    }
  }
  return gamma;
}

NonlinearConnection canonical_N(const GLMetric& g, const DerivativeEngine& eng) {
  if (!g.is_y_independent()) throw std::invalid_argument("canonical_N: metric depends on y");
  const int n = g.dimension();
  return NonlinearConnection(n, [g, eng, n](const PointTM& p) {
    const Array3 gamma = levi_civita(g, p, eng);
    Eigen::MatrixXd N = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) N(i, j) += gamma(i, j, k) * p.y[static_cast<std::size_t>(k)];
      }
    }
    return N;
  });
}

Array3 compatibility_residual(const GLMetric& g, const Array3& F, const Eigen::MatrixXd& N_at_p,
                              std::span<const double> w_at_p, const PointTM& p, const DerivativeEngine& eng) {
  const int n = g.dimension();
  Array3 R = h_cov_deriv_02(g.field(), F, N_at_p, p, eng);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const double gjk = g(j, k)(p);
      for (int i = 0; i < n; ++i) R(j, k, i) -= w_at_p[static_cast<std::size_t>(i)] * gjk;
    }
  }
  return R;
}

}  // namespace glweyl
