#include "glweyl/field.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <optional>
#include <stdexcept>

namespace glweyl {

struct ScalarField::Impl {
  std::optional<Expr> expr;
  Function function;
  bool x_only = true;

  // Lazily built derivative fields, slot 2*i for x_i and 2*i+1 for y_i.
  mutable std::vector<std::once_flag> once;
  mutable std::vector<std::unique_ptr<ScalarField>> derivatives;
};

namespace {

const ScalarField& zero_field() {
  static const ScalarField zero{Expr::constant(0.0)};
  return zero;
}

}  // namespace

ScalarField::ScalarField() : ScalarField(Expr::constant(0.0)) {}

ScalarField::ScalarField(Expr e) {
  auto impl = std::make_shared<Impl>();
  const auto slots = static_cast<std::size_t>(2 * (e.max_index() + 1));
  impl->x_only = e.is_x_only();
  impl->expr = std::move(e);
  impl->once = std::vector<std::once_flag>(slots);
  impl->derivatives.resize(slots);
  impl_ = std::move(impl);
}

ScalarField::ScalarField(Function f, bool x_only) {
  if (!f) throw std::invalid_argument("ScalarField: empty callable");
  auto impl = std::make_shared<Impl>();
  impl->function = std::move(f);
  impl->x_only = x_only;
  impl_ = std::move(impl);
}

bool ScalarField::has_expr() const noexcept { return impl_->expr.has_value(); }

const Expr& ScalarField::expr() const {
  if (!impl_->expr) throw std::logic_error("ScalarField is not expression-backed");
  return *impl_->expr;
}

bool ScalarField::is_x_only() const noexcept { return impl_->x_only; }

double ScalarField::operator()(const PointTM& p) const {
  if (impl_->expr) return evaluate(*impl_->expr, p);
  const double v = impl_->function(p);
  if (!std::isfinite(v)) throw DomainError("<callable>", "non-finite value");
  return v;
}

const ScalarField& ScalarField::derivative(Variable v) const {
  if (!impl_->expr) throw std::invalid_argument("symbolic derivative requested for a callable-backed field");
  const auto slot = static_cast<std::size_t>(2 * v.index + (v.kind == Variable::Kind::y ? 1 : 0));
  if (v.index < 0 || slot >= impl_->derivatives.size()) return zero_field();
  std::call_once(impl_->once[slot], [&] {
    impl_->derivatives[slot] = std::make_unique<ScalarField>(differentiate(*impl_->expr, v));
  });
  return *impl_->derivatives[slot];
}

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  if (a.has_expr() && b.has_expr()) return ScalarField(a.expr() + b.expr());
  return ScalarField([a, b](const PointTM& p) { return a(p) + b(p); }, a.is_x_only() && b.is_x_only());
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  if (a.has_expr() && b.has_expr()) return ScalarField(a.expr() - b.expr());
  return ScalarField([a, b](const PointTM& p) { return a(p) - b(p); }, a.is_x_only() && b.is_x_only());
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  if (a.has_expr() && b.has_expr()) return ScalarField(a.expr() * b.expr());
  return ScalarField([a, b](const PointTM& p) { return a(p) * b(p); }, a.is_x_only() && b.is_x_only());
}

ScalarField operator*(double c, const ScalarField& a) { return ScalarField::constant(c) * a; }

ScalarField exp(const ScalarField& a) {
  if (a.has_expr()) return ScalarField(exp(a.expr()));
  return ScalarField([a](const PointTM& p) { return std::exp(a(p)); }, a.is_x_only());
}

double Array3::max_abs() const noexcept {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

// ---------------------------------------------------------------------------

DTensorField::DTensorField(int n, int upper, int lower, std::vector<ScalarField> components)
    : n_(n), upper_(upper), lower_(lower), components_(std::move(components)) {
  if (n < 1 || upper < 0 || lower < 0) throw std::invalid_argument("DTensorField: bad shape");
  std::size_t expected = 1;
  for (int k = 0; k < upper + lower; ++k) expected *= static_cast<std::size_t>(n);
  if (components_.size() != expected) {
    throw std::invalid_argument("DTensorField: expected " + std::to_string(expected) + " components, got " +
                                std::to_string(components_.size()));
  }
}

DTensorField DTensorField::zero(int n, int upper, int lower) {
  std::size_t count = 1;
  for (int k = 0; k < upper + lower; ++k) count *= static_cast<std::size_t>(n);
  return DTensorField(n, upper, lower, std::vector<ScalarField>(count));
}

std::size_t DTensorField::flat_index(std::initializer_list<int> index) const {
  if (static_cast<int>(index.size()) != upper_ + lower_) throw std::invalid_argument("DTensorField: wrong index rank");
  std::size_t flat = 0;
  for (int i : index) {
    if (i < 0 || i >= n_) throw std::out_of_range("DTensorField: index out of range");
    flat = flat * static_cast<std::size_t>(n_) + static_cast<std::size_t>(i);
  }
  return flat;
}

const ScalarField& DTensorField::component(std::initializer_list<int> index) const {
  return components_[flat_index(index)];
}

// ---------------------------------------------------------------------------

double DerivativeEngine::step_for(double coordinate) const noexcept { return h0 * std::max(1.0, std::abs(coordinate)); }

std::string DerivativeEngine::name() const { return is_symbolic() ? "symbolic" : "fd"; }

double partial(const ScalarField& f, Variable v, const PointTM& p, const DerivativeEngine& eng) {
  if (v.kind == Variable::Kind::y && f.is_x_only()) return 0.0;
  if (eng.is_symbolic()) return f.derivative(v)(p);

  auto& coords = v.kind == Variable::Kind::x ? p.x : p.y;
  if (v.index < 0 || v.index >= static_cast<int>(coords.size())) throw std::out_of_range("partial: coordinate index");
  const double c = coords[static_cast<std::size_t>(v.index)];
  const double h = eng.step_for(c);
  PointTM shifted = p;
  auto& target = v.kind == Variable::Kind::x ? shifted.x : shifted.y;
  target[static_cast<std::size_t>(v.index)] = c + h;
  const double forward = f(shifted);
  target[static_cast<std::size_t>(v.index)] = c - h;
  const double backward = f(shifted);
  return (forward - backward) / (2.0 * h);
}

ScalarField partial_field(const ScalarField& f, Variable v, const DerivativeEngine& eng) {
  if (v.kind == Variable::Kind::y && f.is_x_only()) return ScalarField::constant(0.0);
  if (eng.is_symbolic()) return f.derivative(v);
  return ScalarField([f, v, eng](const PointTM& p) { return partial(f, v, p, eng); }, f.is_x_only());
}

}  // namespace glweyl
