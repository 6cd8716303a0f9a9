#pragma once

// Scalar expressions in the coordinates x1..xn, y1..yn of TM.
//
// Grammar (whitespace insignificant):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?
//   exponent:= '-'? primary ('^' exponent)?     -- must be variable-free
//   primary := number | ident | func '(' expr ')' | '(' expr ')'
//   ident   := ('x' | 'y') digit+
//   func    := exp | ln | sqrt | sin | cos
//
// Expr values are immutable and share structure; copying is cheap and
// concurrent evaluation of one Expr from many threads is safe.

#include <memory>
#include <string>
#include <string_view>

#include "glweyl/errors.hpp"
#include "glweyl/point.hpp"

namespace glweyl {

/// A coordinate on TM. `index` is 0-based; x^1 is {Kind::x, 0}.
struct Variable {
  enum class Kind { x, y };
  Kind kind = Kind::x;
  int index = 0;

  static Variable x(int i) { return {Kind::x, i}; }
  static Variable y(int i) { return {Kind::y, i}; }

  friend bool operator==(const Variable&, const Variable&) = default;
};

std::string to_string(const Variable& v);

class Expr {
 public:
  enum class Op { constant, var_x, var_y, neg, exp, ln, sqrt, sin, cos, add, sub, mul, div, pow };

  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable(Variable v);
  static Expr x(int index) { return variable(Variable::x(index)); }
  static Expr y(int index) { return variable(Variable::y(index)); }

  Op op() const noexcept;
  /// Literal value for constants, exponent for pow.
  double value() const noexcept;
  /// 0-based coordinate index for variables.
  int index() const noexcept;
  int arity() const noexcept;
  const Expr& operand(int k) const;

  bool is_constant() const noexcept { return op() == Op::constant; }
  bool is_zero() const noexcept { return is_constant() && value() == 0.0; }
  bool is_one() const noexcept { return is_constant() && value() == 1.0; }

  /// True iff no y-variable occurs in the tree.
  bool is_x_only() const noexcept;
  /// True iff no variable occurs in the tree.
  bool is_variable_free() const noexcept;
  /// Largest 0-based variable index present, or -1.
  int max_index() const noexcept;

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  friend Expr exp(const Expr& a);
  friend Expr ln(const Expr& a);
  friend Expr sqrt(const Expr& a);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr pow(const Expr& base, double exponent);

 private:
  friend struct ExprRawBuilder;
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Expr make(Op op, double value, int index, const Expr* a, const Expr* b);

  std::shared_ptr<const Node> node_;
};

Expr exp(const Expr& a);
Expr ln(const Expr& a);
Expr sqrt(const Expr& a);
Expr sin(const Expr& a);
Expr cos(const Expr& a);
Expr pow(const Expr& base, double exponent);

/// Parses `text` with variables restricted to indices 1..n.
/// Throws ParseError.
Expr parse(std::string_view text, int n);

/// Throws DomainError on division by zero, ln of a non-positive argument,
/// sqrt of a negative argument, or any non-finite intermediate; throws
/// std::invalid_argument if the point is too small for the variables used.
double evaluate(const Expr& e, const PointTM& p);

/// Exact partial derivative. Only literal 0/1 and constant-constant
/// arithmetic are folded; there is no further simplification.
Expr differentiate(const Expr& e, Variable v);

/// Minimal-parenthesis infix form that `parse` reads back to an equal-valued
/// tree. Constants are printed with 17 significant digits.
std::string to_string(const Expr& e);

/// Prefix tree form, e.g. "add(pow(X1,2),Y2)". Used for structural tests.
std::string tree_string(const Expr& e);

}  // namespace glweyl
