#include "glweyl/expr.hpp"

#include <algorithm>
#include <array>
#include <vector>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <locale>
#include <sstream>
#include <stdexcept>

namespace glweyl {

ParseError::ParseError(Kind kind, std::size_t offset, const std::string& what)
    : std::runtime_error(what + " at offset " + std::to_string(offset)), kind_(kind), offset_(offset) {}

DomainError::DomainError(std::string subtree, const std::string& what)
    : std::runtime_error(what + " in '" + subtree + "'"), subtree_(std::move(subtree)) {}

bool PointTM::is_finite() const noexcept {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(x.begin(), x.end(), finite) && std::all_of(y.begin(), y.end(), finite);
}

namespace {

std::string format_number(double v, int digits) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.precision(digits);
  os << v;
  return os.str();
}

}  // namespace

std::string to_string(const PointTM& p) {
  std::string out;
  for (int i = 0; i < p.dimension(); ++i) {
    if (!out.empty()) out += ',';
    out += "x" + std::to_string(i + 1) + "=" + format_number(p.x[i], 17);
  }
  for (int i = 0; i < static_cast<int>(p.y.size()); ++i) {
    out += ",y" + std::to_string(i + 1) + "=" + format_number(p.y[i], 17);
  }
  return out;
}

std::string to_string(const Variable& v) {
  return (v.kind == Variable::Kind::x ? "x" : "y") + std::to_string(v.index + 1);
}

struct Expr::Node {
  Op op = Op::constant;
  double value = 0.0;
  int index = 0;
  std::vector<Expr> args;
  bool x_only = true;
  bool variable_free = true;
  int max_index = -1;
};

Expr::Expr() : Expr(constant(0.0)) {}

Expr Expr::make(Op op, double value, int index, const Expr* a, const Expr* b) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->value = value;
  node->index = index;
  if (op == Op::var_x || op == Op::var_y) {
    node->x_only = op == Op::var_x;
    node->variable_free = false;
    node->max_index = index;
  }
  for (const Expr* child : {a, b}) {
    if (child == nullptr) continue;
    node->args.push_back(*child);
    node->x_only = node->x_only && child->is_x_only();
    node->variable_free = node->variable_free && child->is_variable_free();
    node->max_index = std::max(node->max_index, child->max_index());
  }
  return Expr(std::shared_ptr<const Node>(std::move(node)));
}

Expr Expr::constant(double value) { return make(Op::constant, value, 0, nullptr, nullptr); }

Expr Expr::variable(Variable v) {
  if (v.index < 0) throw std::invalid_argument("negative variable index");
  return make(v.kind == Variable::Kind::x ? Op::var_x : Op::var_y, 0.0, v.index, nullptr, nullptr);
}

Expr::Op Expr::op() const noexcept { return node_->op; }
double Expr::value() const noexcept { return node_->value; }
int Expr::index() const noexcept { return node_->index; }
int Expr::arity() const noexcept { return static_cast<int>(node_->args.size()); }
const Expr& Expr::operand(int k) const {
  if (k < 0 || k >= arity()) throw std::out_of_range("Expr operand index");
  return node_->args[static_cast<std::size_t>(k)];
}
bool Expr::is_x_only() const noexcept { return node_->x_only; }
bool Expr::is_variable_free() const noexcept { return node_->variable_free; }
int Expr::max_index() const noexcept { return node_->max_index; }

// Builders fold literal zeros and ones and constant-constant arithmetic.

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  return Expr::make(Expr::Op::add, 0.0, 0, &a, &b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (b.is_zero()) return a;
  if (a.is_zero()) return -b;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  return Expr::make(Expr::Op::sub, 0.0, 0, &a, &b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_zero() || b.is_zero()) return Expr::constant(0.0);
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  return Expr::make(Expr::Op::mul, 0.0, 0, &a, &b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_one()) return a;
  if (a.is_zero() && !b.is_zero()) return Expr::constant(0.0);
  if (a.is_constant() && b.is_constant() && b.value() != 0.0) return Expr::constant(a.value() / b.value());
  return Expr::make(Expr::Op::div, 0.0, 0, &a, &b);
}

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.op() == Expr::Op::neg) return a.operand(0);
  return Expr::make(Expr::Op::neg, 0.0, 0, &a, nullptr);
}

Expr exp(const Expr& a) {
  if (a.is_zero()) return Expr::constant(1.0);
  return Expr::make(Expr::Op::exp, 0.0, 0, &a, nullptr);
}

Expr ln(const Expr& a) {
  if (a.is_one()) return Expr::constant(0.0);
  return Expr::make(Expr::Op::ln, 0.0, 0, &a, nullptr);
}

Expr sqrt(const Expr& a) {
  if (a.is_zero() || a.is_one()) return a;
  return Expr::make(Expr::Op::sqrt, 0.0, 0, &a, nullptr);
}

Expr sin(const Expr& a) {
  if (a.is_zero()) return Expr::constant(0.0);
  return Expr::make(Expr::Op::sin, 0.0, 0, &a, nullptr);
}

Expr cos(const Expr& a) {
  if (a.is_zero()) return Expr::constant(1.0);
  return Expr::make(Expr::Op::cos, 0.0, 0, &a, nullptr);
}

Expr pow(const Expr& base, double exponent) {
  if (exponent == 0.0) return Expr::constant(1.0);
  if (exponent == 1.0) return base;
  if (base.is_one()) return base;
  return Expr::make(Expr::Op::pow, exponent, 0, &base, nullptr);
}

// ---------------------------------------------------------------------------
// Parser

// Unfolded construction: the parser keeps the tree exactly as written.
struct ExprRawBuilder {
  static Expr unary(Expr::Op op, const Expr& a) { return Expr::make(op, 0.0, 0, &a, nullptr); }
  static Expr binary(Expr::Op op, const Expr& a, const Expr& b) { return Expr::make(op, 0.0, 0, &a, &b); }
  static Expr power(const Expr& a, double exponent) { return Expr::make(Expr::Op::pow, exponent, 0, &a, nullptr); }
};

namespace {

using Raw = ExprRawBuilder;

class Parser {
 public:
  Parser(std::string_view text, int n) : text_(text), n_(n) {}

  Expr run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail_syntax("unexpected '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(ParseError::Kind kind, std::size_t at, const std::string& msg) const {
    throw ParseError(kind, at + 1, msg);
  }
  [[noreturn]] void fail_syntax(const std::string& msg) const { fail(ParseError::Kind::syntax, pos_, msg); }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail_syntax(std::string("expected '") + c + "' before end of input");
      fail_syntax(std::string("expected '") + c + "'");
    }
  }

  Expr parse_sum() {
    Expr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = Raw::binary(Expr::Op::add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = Raw::binary(Expr::Op::sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_product() {
    Expr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = Raw::binary(Expr::Op::mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = Raw::binary(Expr::Op::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_unary() {
    if (accept('-')) return Raw::unary(Expr::Op::neg, parse_unary());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (accept('^')) {
      skip_ws();
      const std::size_t at = pos_;
      const Expr exponent = parse_exponent();
      if (!exponent.is_variable_free()) {
        fail(ParseError::Kind::non_constant_exponent, at, "exponent must be a constant");
      }
      return Raw::power(base, evaluate(exponent, PointTM{}));
    }
    return base;
  }

  Expr parse_exponent() {
    if (accept('-')) return Raw::unary(Expr::Op::neg, parse_exponent());
    return parse_power();
  }

  Expr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail_syntax("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Expr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_identifier();
    fail_syntax("unexpected '" + std::string(1, c) + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t count = 0;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
        ++count;
      }
      return count;
    };
    std::size_t mantissa = digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) fail(ParseError::Kind::syntax, start, "malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail_syntax("malformed exponent in number");
    }
    std::istringstream is(std::string(text_.substr(start, pos_ - start)));
    is.imbue(std::locale::classic());
    double value = 0.0;
    is >> value;
    if (is.fail() || !std::isfinite(value)) fail(ParseError::Kind::syntax, start, "number out of range");
    return Expr::constant(value);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);

    if ((name[0] == 'x' || name[0] == 'y') && name.size() > 1 &&
        std::all_of(name.begin() + 1, name.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      if (name.size() > 10) fail(ParseError::Kind::index_out_of_range, start, "variable index too large");
      const long index = std::strtol(std::string(name.substr(1)).c_str(), nullptr, 10);
      if (index < 1 || index > n_) {
        fail(ParseError::Kind::index_out_of_range, start,
             "variable '" + std::string(name) + "' outside 1.." + std::to_string(n_));
      }
      const int i = static_cast<int>(index) - 1;
      return name[0] == 'x' ? Expr::x(i) : Expr::y(i);
    }

    static constexpr std::pair<std::string_view, Expr::Op> functions[] = {
        {"exp", Expr::Op::exp}, {"ln", Expr::Op::ln}, {"sqrt", Expr::Op::sqrt},
        {"sin", Expr::Op::sin}, {"cos", Expr::Op::cos}};
    for (const auto& [fname, op] : functions) {
      if (name == fname) {
        expect('(');
        Expr arg = parse_sum();
        expect(')');
        return Raw::unary(op, arg);
      }
    }
    fail(ParseError::Kind::unknown_identifier, start, "unknown identifier '" + std::string(name) + "'");
  }

  std::string_view text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, int n) {
  if (n < 1) throw std::invalid_argument("dimension must be at least 1");
  try {
    return Parser(text, n).run();
  } catch (const DomainError& e) {
    throw ParseError(ParseError::Kind::non_constant_exponent, 1, std::string("exponent is not a finite constant: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

double eval_node(const Expr& e, const PointTM& p) {
  using Op = Expr::Op;
  auto coordinate = [&](const std::vector<double>& values) {
    if (e.index() >= static_cast<int>(values.size())) {
      throw std::invalid_argument("point dimension " + std::to_string(values.size()) + " too small for " +
                                  to_string(e));
    }
    return values[static_cast<std::size_t>(e.index())];
  };

  double result = 0.0;
  switch (e.op()) {
    case Op::constant:
      return e.value();
    case Op::var_x:
      return coordinate(p.x);
    case Op::var_y:
      return coordinate(p.y);
    case Op::neg:
      return -eval_node(e.operand(0), p);
    case Op::exp:
      result = std::exp(eval_node(e.operand(0), p));
      break;
    case Op::ln: {
      const double a = eval_node(e.operand(0), p);
      if (!(a > 0.0)) throw DomainError(to_string(e), "ln of non-positive value");
      result = std::log(a);
      break;
    }
    case Op::sqrt: {
      const double a = eval_node(e.operand(0), p);
      if (a < 0.0) throw DomainError(to_string(e), "sqrt of negative value");
      result = std::sqrt(a);
      break;
    }
    case Op::sin:
      result = std::sin(eval_node(e.operand(0), p));
      break;
    case Op::cos:
      result = std::cos(eval_node(e.operand(0), p));
      break;
    case Op::add:
      result = eval_node(e.operand(0), p) + eval_node(e.operand(1), p);
      break;
    case Op::sub:
      result = eval_node(e.operand(0), p) - eval_node(e.operand(1), p);
      break;
    case Op::mul:
      result = eval_node(e.operand(0), p) * eval_node(e.operand(1), p);
      break;
    case Op::div: {
      const double num = eval_node(e.operand(0), p);
      const double den = eval_node(e.operand(1), p);
      if (den == 0.0) throw DomainError(to_string(e), "division by zero");
      result = num / den;
      break;
    }
    case Op::pow: {
      const double base = eval_node(e.operand(0), p);
      const double exponent = e.value();
      if (base < 0.0 && exponent != std::trunc(exponent)) {
        throw DomainError(to_string(e), "negative base with non-integer exponent");
      }
      if (base == 0.0 && exponent < 0.0) throw DomainError(to_string(e), "division by zero");
      result = std::pow(base, exponent);
      break;
    }
  }
  if (!std::isfinite(result)) throw DomainError(to_string(e), "non-finite value");
  return result;
}

}  // namespace

double evaluate(const Expr& e, const PointTM& p) { return eval_node(e, p); }

// ---------------------------------------------------------------------------
// Differentiation

Expr differentiate(const Expr& e, Variable v) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::constant:
      return Expr::constant(0.0);
    case Op::var_x:
      return Expr::constant(v.kind == Variable::Kind::x && v.index == e.index() ? 1.0 : 0.0);
    case Op::var_y:
      return Expr::constant(v.kind == Variable::Kind::y && v.index == e.index() ? 1.0 : 0.0);
    default:
      break;
  }

  const Expr& a = e.operand(0);
  const Expr da = differentiate(a, v);
  switch (e.op()) {
    case Op::neg:
      return -da;
    case Op::exp:
      return e * da;
    case Op::ln:
      return da / a;
    case Op::sqrt:
      return da / (Expr::constant(2.0) * e);
    case Op::sin:
      return cos(a) * da;
    case Op::cos:
      return -sin(a) * da;
    case Op::pow:
      return Expr::constant(e.value()) * pow(a, e.value() - 1.0) * da;
    default:
      break;
  }

  const Expr& b = e.operand(1);
  const Expr db = differentiate(b, v);
  switch (e.op()) {
    case Op::add:
      return da + db;
    case Op::sub:
      return da - db;
    case Op::mul:
      return da * b + a * db;
    case Op::div:
      return (da * b - a * db) / pow(b, 2.0);
    default:
      throw std::logic_error("differentiate: unhandled node");
  }
}

// ---------------------------------------------------------------------------
// Printing

namespace {

constexpr int kPrecSum = 1;
constexpr int kPrecProduct = 2;
constexpr int kPrecUnary = 3;
constexpr int kPrecPower = 4;
constexpr int kPrecAtom = 5;

const char* function_name(Expr::Op op) {
  switch (op) {
    case Expr::Op::exp: return "exp";
    case Expr::Op::ln: return "ln";
    case Expr::Op::sqrt: return "sqrt";
    case Expr::Op::sin: return "sin";
    case Expr::Op::cos: return "cos";
    default: return nullptr;
  }
}

std::string print(const Expr& e, int min_prec) {
  using Op = Expr::Op;
  std::string body;
  int prec = kPrecAtom;
  switch (e.op()) {
    case Op::constant:
      body = format_number(e.value(), 17);
      if (std::signbit(e.value())) prec = kPrecUnary;
      break;
    case Op::var_x:
    case Op::var_y:
      body = to_string(Variable{e.op() == Op::var_x ? Variable::Kind::x : Variable::Kind::y, e.index()});
      break;
    case Op::neg:
      body = "-" + print(e.operand(0), kPrecUnary);
      prec = kPrecUnary;
      break;
    case Op::exp:
    case Op::ln:
    case Op::sqrt:
    case Op::sin:
    case Op::cos:
      body = std::string(function_name(e.op())) + "(" + print(e.operand(0), 0) + ")";
      break;
    case Op::add:
    case Op::sub:
      body = print(e.operand(0), kPrecSum) + (e.op() == Op::add ? "+" : "-") + print(e.operand(1), kPrecProduct);
      prec = kPrecSum;
      break;
    case Op::mul:
    case Op::div:
      body = print(e.operand(0), kPrecProduct) + (e.op() == Op::mul ? "*" : "/") + print(e.operand(1), kPrecUnary);
      prec = kPrecProduct;
      break;
    case Op::pow: {
      const std::string exponent = format_number(e.value(), 17);
      body = print(e.operand(0), kPrecAtom) + "^" + (std::signbit(e.value()) ? "(" + exponent + ")" : exponent);
      prec = kPrecPower;
      break;
    }
  }
  return prec < min_prec ? "(" + body + ")" : body;
}

void print_tree(const Expr& e, std::string& out) {
  using Op = Expr::Op;
  switch (e.op()) {
    case Op::constant:
      out += format_number(e.value(), 17);
      return;
    case Op::var_x:
      out += "X" + std::to_string(e.index() + 1);
      return;
    case Op::var_y:
      out += "Y" + std::to_string(e.index() + 1);
      return;
    case Op::pow:
      out += "pow(";
      print_tree(e.operand(0), out);
      out += "," + format_number(e.value(), 17) + ")";
      return;
    default:
      break;
  }
  static constexpr std::pair<Op, const char*> names[] = {
      {Op::neg, "neg"}, {Op::exp, "exp"}, {Op::ln, "ln"},   {Op::sqrt, "sqrt"}, {Op::sin, "sin"},
      {Op::cos, "cos"}, {Op::add, "add"}, {Op::sub, "sub"}, {Op::mul, "mul"},   {Op::div, "div"}};
  for (const auto& [op, name] : names) {
    if (op == e.op()) out += name;
  }
  out += '(';
  for (int k = 0; k < e.arity(); ++k) {
    if (k > 0) out += ',';
    print_tree(e.operand(k), out);
  }
  out += ')';
}

}  // namespace

std::string to_string(const Expr& e) { return print(e, 0); }

std::string tree_string(const Expr& e) {
  std::string out;
  print_tree(e, out);
  return out;
}

}  // namespace glweyl
