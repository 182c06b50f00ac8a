#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace hodgedirac {

struct ParseError : std::runtime_error {
  size_t offset;
  std::string expected;

  ParseError(size_t at, std::string want)
      : std::runtime_error("parse error at byte " + std::to_string(at) + ": expected " + want),
        offset(at),
        expected(std::move(want)) {}
};

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Arithmetic expression over variables x, y and the constant pi, with
/// + - * / ^, unary minus and sin/cos/exp/sqrt.  `^` binds tightest and is
/// right-associative; the other binary operators are left-associative.
/// Evaluation is pure; division by zero and domain errors raise EvalError.
class Expression {
 public:
  static Expression parse(std::string_view text);

  double operator()(double x, double y) const;

  /// Prints with minimal parentheses; parsing the result yields an equal
  /// tree.
  std::string to_string() const;

  bool operator==(const Expression& other) const;

  struct Node;

 private:
  explicit Expression(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;

  friend class ExpressionParser;
};

}  // namespace hodgedirac
