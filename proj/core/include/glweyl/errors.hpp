#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace glweyl {

/// Malformed expression text. `offset()` is the 1-based byte column at
/// which the problem was detected (one past the end for truncated input).
class ParseError : public std::runtime_error {
 public:
  enum class Kind { syntax, unknown_identifier, index_out_of_range, non_constant_exponent };

  ParseError(Kind kind, std::size_t offset, const std::string& what);

  Kind kind() const noexcept { return kind_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

/// Evaluation left the real domain (division by zero, ln of a non-positive
/// number, sqrt of a negative number, or a non-finite intermediate).
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string subtree, const std::string& what);

  /// Printed form of the offending subexpression.
  const std::string& subtree() const noexcept { return subtree_; }

 private:
  std::string subtree_;
};

/// |det g| fell at or below the non-degeneracy threshold.
class SingularMetricError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace glweyl
