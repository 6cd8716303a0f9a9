#pragma once

// Scalar and d-tensor fields on TM, and the two derivative engines.
//
// Index convention: every tensor index and coordinate index in the C++ API
// is 0-based. Only printed names (x1, g_1_2, ...) are 1-based.

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "glweyl/expr.hpp"
#include "glweyl/point.hpp"

namespace glweyl {

/// A real-valued function on TM, backed either by an Expr or by an opaque
/// callable. Expr-backed fields cache their symbolic partial derivatives.
class ScalarField {
 public:
  using Function = std::function<double(const PointTM&)>;

  /// The zero field.
  ScalarField();
  ScalarField(Expr e);  // NOLINT(google-explicit-constructor)
  /// `x_only` is a promise that the callable ignores p.y.
  ScalarField(Function f, bool x_only);

  static ScalarField constant(double c) { return ScalarField(Expr::constant(c)); }

  bool has_expr() const noexcept;
  /// Throws std::logic_error for callable-backed fields.
  const Expr& expr() const;
  bool is_x_only() const noexcept;

  double operator()(const PointTM& p) const;

  /// Exact partial derivative as a new field; requires has_expr().
  const ScalarField& derivative(Variable v) const;

  friend ScalarField operator+(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator-(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(const ScalarField& a, const ScalarField& b);
  friend ScalarField operator*(double c, const ScalarField& a);
  friend ScalarField exp(const ScalarField& a);

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

ScalarField exp(const ScalarField& a);

/// Dense 3-index array of n^3 reals, row-major in (a, b, c).
class Array3 {
 public:
  Array3() = default;
  explicit Array3(int n, double fill = 0.0)
      : n_(n), data_(static_cast<std::size_t>(n) * static_cast<std::size_t>(n) * static_cast<std::size_t>(n), fill) {}

  int dimension() const noexcept { return n_; }
  double& operator()(int a, int b, int c) { return data_[offset(a, b, c)]; }
  double operator()(int a, int b, int c) const { return data_[offset(a, b, c)]; }
  const std::vector<double>& data() const noexcept { return data_; }
  std::vector<double>& data() noexcept { return data_; }

  double max_abs() const noexcept;

 private:
  std::size_t offset(int a, int b, int c) const noexcept {
    return (static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b)) *
               static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(c);
  }

  int n_ = 0;
  std::vector<double> data_;
};

/// A d-tensor field of valence (r, s): n^(r+s) scalar components addressed
/// by a multi-index with the r upper indices first, row-major.
class DTensorField {
 public:
  DTensorField(int n, int upper, int lower, std::vector<ScalarField> components);

  /// All-zero field.
  static DTensorField zero(int n, int upper, int lower);

  int dimension() const noexcept { return n_; }
  int upper() const noexcept { return upper_; }
  int lower() const noexcept { return lower_; }
  std::size_t size() const noexcept { return components_.size(); }

  const ScalarField& component(std::initializer_list<int> index) const;
  /// Shorthand for valence (0,2) or (1,1).
  const ScalarField& operator()(int a, int b) const { return component({a, b}); }
  const std::vector<ScalarField>& components() const noexcept { return components_; }

  std::size_t flat_index(std::initializer_list<int> index) const;

 private:
  int n_;
  int upper_;
  int lower_;
  std::vector<ScalarField> components_;
};

/// Derivative evaluation policy: exact symbolic differentiation, or central
/// differences with step h_i = h0 * max(1, |coordinate_i|).
struct DerivativeEngine {
  enum class Mode { symbolic, central_fd };

  Mode mode = Mode::symbolic;
  double h0 = 1e-5;

  static DerivativeEngine symbolic() { return {Mode::symbolic, 1e-5}; }
  static DerivativeEngine central_fd(double step = 1e-5) { return {Mode::central_fd, step}; }

  bool is_symbolic() const noexcept { return mode == Mode::symbolic; }
  double step_for(double coordinate) const noexcept;
  /// "symbolic" or "fd".
  std::string name() const;
};

/// Partial derivative of `f` along coordinate `v` at `p`. Symbolic mode
/// requires an Expr-backed field (std::invalid_argument otherwise). The y
/// partials of x-only fields are exactly 0 in both modes.
double partial(const ScalarField& f, Variable v, const PointTM& p, const DerivativeEngine& eng);

inline double partial_x(const ScalarField& f, int i, const PointTM& p, const DerivativeEngine& eng) {
  return partial(f, Variable::x(i), p, eng);
}
inline double partial_y(const ScalarField& f, int i, const PointTM& p, const DerivativeEngine& eng) {
  return partial(f, Variable::y(i), p, eng);
}

/// The partial derivative itself as a field: Expr-backed in symbolic mode,
/// a finite-difference callable otherwise.
ScalarField partial_field(const ScalarField& f, Variable v, const DerivativeEngine& eng);

}  // namespace glweyl
