#pragma once

// Nonlinear connections and d-connections with their covariant derivatives.
//
// Coefficient arrays use Array3 with the upper index first:
//   F(i, j, k) = F^i_jk,  C(i, j, k) = C^i_jk,  Gamma(i, j, k) = Gamma^i_jk.
// Covariant derivatives of a (0,2) field t are returned as R(j, k, i) = t_{jk|i}.
//
// Connection objects are immutable; coefficients are computed per point on
// demand and never cached across calls.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "glweyl/field.hpp"
#include "glweyl/metric.hpp"

namespace glweyl {

/// Coefficients N^j_i(x, y) of a horizontal distribution. The adapted
/// frame is delta/delta x^i = d/dx^i - N^j_i d/dy^j.
class NonlinearConnection {
 public:
  /// Evaluates the whole matrix at once; entry (j, i) is N^j_i.
  using MatrixFunction = std::function<Eigen::MatrixXd(const PointTM&)>;

  /// `entries[j * n + i]` holds N^j_i.
  NonlinearConnection(int n, std::vector<ScalarField> entries);
  NonlinearConnection(int n, MatrixFunction evaluator);

  static NonlinearConnection zero(int n);

  int dimension() const noexcept { return n_; }
  Eigen::MatrixXd evaluate(const PointTM& p) const;
  /// N^j_i as a scalar field.
  ScalarField coefficient(int j, int i) const;

 private:
  int n_;
  std::vector<ScalarField> entries_;
  MatrixFunction evaluator_;
};

struct ConnectionCoefficients {
  Array3 F;  ///< horizontal F^i_jk
  Array3 C;  ///< vertical C^i_jk
};

/// A d-connection, given by its Christoffel pair (F, C).
class FinslerConnection {
 public:
  using Evaluator = std::function<ConnectionCoefficients(const PointTM&)>;

  FinslerConnection(int n, Evaluator evaluator);

  /// From explicit component fields, each indexed row-major by (i, j, k).
  static FinslerConnection from_fields(int n, std::vector<ScalarField> F, std::vector<ScalarField> C);

  int dimension() const noexcept { return n_; }
  ConnectionCoefficients evaluate(const PointTM& p) const;

 private:
  int n_;
  Evaluator evaluator_;
};

/// Pointwise coefficient block, e.g. C^i_jk of the vertical Cartan-type
/// connection.
using CoefficientField = std::function<Array3(const PointTM&)>;

struct SymmetryDefects {
  double max_abs_vertical = 0.0;   ///< max |C^i_jk|
  double max_h_asymmetry = 0.0;    ///< max |F^i_jk - F^i_kj|
  double max_v_asymmetry = 0.0;    ///< max |C^i_jk - C^i_kj|

  bool horizontal(double tol = 0.0) const noexcept { return max_abs_vertical <= tol; }
  bool h_symmetric(double tol = 0.0) const noexcept { return max_h_asymmetry <= tol; }
  bool total_symmetric(double tol = 0.0) const noexcept { return h_symmetric(tol) && max_v_asymmetry <= tol; }
};

SymmetryDefects symmetry_defects(const ConnectionCoefficients& c);
SymmetryDefects symmetry_defects(const FinslerConnection& conn, std::span<const PointTM> points);

/// delta f / delta x^i at p.
double delta_x(const ScalarField& f, int i, const PointTM& p, const NonlinearConnection& N, const DerivativeEngine& eng);
double delta_x(const ScalarField& f, int i, const PointTM& p, const Eigen::MatrixXd& N_at_p, const DerivativeEngine& eng);

/// Horizontal covariant derivative of a (0,2) field:
///   t_{jk|i} = delta t_jk / delta x^i - t_ak F^a_ji - t_ja F^a_ki.
Array3 h_cov_deriv_02(const DTensorField& t, const FinslerConnection& conn, const NonlinearConnection& N,
                      const PointTM& p, const DerivativeEngine& eng);
Array3 h_cov_deriv_02(const DTensorField& t, const Array3& F, const Eigen::MatrixXd& N_at_p, const PointTM& p,
                      const DerivativeEngine& eng);

/// Vertical covariant derivative of a (0,2) field:
///   t_jk|_i = d t_jk / d y^i - t_ak C^a_ji - t_ja C^a_ki.
Array3 v_cov_deriv_02(const DTensorField& t, const FinslerConnection& conn, const PointTM& p,
                      const DerivativeEngine& eng);
Array3 v_cov_deriv_02(const DTensorField& t, const Array3& C, const PointTM& p, const DerivativeEngine& eng);

/// Chern-Rund connection of (g, N):
///   F^i_jk = 1/2 g^{ia} (delta_j g_ak + delta_k g_ja - delta_a g_jk),  C = 0.
FinslerConnection chern_rund(const GLMetric& g, const NonlinearConnection& N, const DerivativeEngine& eng);

/// The same formula without the 1/2 normalization. Not metrical; kept only
/// to measure how far it is from satisfying g_{jk|i} = 0.
FinslerConnection chern_rund_unnormalized(const GLMetric& g, const NonlinearConnection& N,
                                          const DerivativeEngine& eng);

/// The horizontal, h-symmetric d-connection with g_{jk|i} = w_i g_jk:
///   F^i_jk = CR F^i_jk - 1/2 (delta^i_j w_k + delta^i_k w_j - g_jk w^i),  C = 0,
/// with w^i = g^{ia} w_a. Throws std::invalid_argument if w depends on y.
FinslerConnection weyl_connection(const GLMetric& g, const NonlinearConnection& N, const OneForm& w,
                                  const DerivativeEngine& eng);

/// C^i_jk = 1/2 g^{ia} (d g_ak/dy^j + d g_ja/dy^k - d g_jk/dy^a).
CoefficientField vertical_cartan(const GLMetric& g, const DerivativeEngine& eng);

/// vertical_cartan(g) corrected by -1/2 (delta^i_j w_k + delta^i_k w_j - g_jk w^i),
/// so that g_jk|_i = w_i g_jk.
CoefficientField vertical_weyl_cartan(const GLMetric& g, const OneForm& w, const DerivativeEngine& eng);

/// With C = vertical_weyl_cartan(g, w), gbar = e^{2f} g and wbar = w + 2 df,
/// returns D(j, k, i) = gbar_jk|_i - wbar_i gbar_jk. The vertical derivative
/// does not see e^{2f(x)}, so D = -2 (df/dx^i) gbar_jk.
Array3 vertical_weyl_defect(const GLMetric& g, const ScalarField& gauge, const OneForm& w, const PointTM& p,
                            const DerivativeEngine& eng);

/// Classical Christoffel symbols of a y-independent metric, x-derivatives
/// only. Throws std::invalid_argument if g depends on y.
Array3 levi_civita(const GLMetric& g, const PointTM& p, const DerivativeEngine& eng);

/// N^i_j = Gamma^i_jk(x) y^k for a y-independent metric.
NonlinearConnection canonical_N(const GLMetric& g, const DerivativeEngine& eng);

/// R(j, k, i) = g_{jk|i} - w_i g_jk for the given horizontal coefficients.
Array3 compatibility_residual(const GLMetric& g, const Array3& F, const Eigen::MatrixXd& N_at_p,
                              std::span<const double> w_at_p, const PointTM& p, const DerivativeEngine& eng);

}  // namespace glweyl
