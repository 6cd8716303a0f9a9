#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace glweyl {

/// A point (x, y) of the tangent bundle in a single fixed chart:
/// x holds the base coordinates x^i, y the fiber coordinates y^i.
struct PointTM {
  std::vector<double> x;
  std::vector<double> y;

  PointTM() = default;
  explicit PointTM(int n) : x(static_cast<std::size_t>(n), 0.0), y(static_cast<std::size_t>(n), 0.0) {}
  PointTM(std::vector<double> base, std::vector<double> fiber)
      : x(std::move(base)), y(std::move(fiber)) {}

  int dimension() const noexcept { return static_cast<int>(x.size()); }
  bool is_finite() const noexcept;

  friend bool operator==(const PointTM&, const PointTM&) = default;
};

/// "x1=..,x2=..,y1=..,y2=.." with 17 significant digits.
std::string to_string(const PointTM& p);

}  // namespace glweyl
