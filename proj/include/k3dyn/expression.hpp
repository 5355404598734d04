#pragma once

// Closed-form test functions on X. Variables x, y, z are the affine
// coordinates w1/w0 of the three factors; `i` and `pi` are constants.
//
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | power
//   power := atom ('^' unary)?
//   atom  := number | name | name '(' expr (',' expr)* ')' | '(' expr ')'
//
// Functions: re im abs conj fs clip sin cos sqrt. fs(v) = |v|^2 / (1 + |v|^2).

#include <complex>
#include <memory>
#include <string>

#include "k3dyn/surface.hpp"

namespace k3dyn::expr {

using Complex = std::complex<double>;

struct Node;

class Expression {
 public:
  /// Throws ErrorKind::invalid_argument with the column of the first error.
  static Expression parse(const std::string& text);

  Complex evaluate(const surface::FloatPoint& p) const;
  Complex evaluate(Complex x, Complex y, Complex z) const;

  /// Conservative static analysis: true only when every path is bounded.
  bool bounded() const;
  bool real_valued() const;
  const std::string& text() const { return text_; }

 private:
  std::shared_ptr<const Node> root_;
  std::string text_;
};

/// Parses and checks that the expression is real-valued and bounded, as the
/// invariance test requires.
Expression parse_test_function(const std::string& text);

}  // namespace k3dyn::expr
