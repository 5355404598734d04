#pragma once

#include <string>

#include "k3dyn/rational.hpp"

namespace k3dyn {

/// Exact element a + b*sqrt(5) of the real quadratic field Q(sqrt 5).
class QSqrt5 {
 public:
  QSqrt5() = default;
  QSqrt5(long a) : a_(a) {}  // NOLINT: implicit lift of integers is intended
  QSqrt5(Rational a) : a_(std::move(a)) {}  // NOLINT
  QSqrt5(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

  static QSqrt5 sqrt5() { return {Rational(0), Rational(1)}; }

  const Rational& rational_part() const { return a_; }
  const Rational& sqrt5_part() const { return b_; }

  bool is_rational() const { return b_ == 0; }
  bool is_zero() const { return a_ == 0 && b_ == 0; }

  /// Image under sqrt5 -> -sqrt5.
  QSqrt5 conjugate() const { return {a_, -b_}; }
  /// Field norm a^2 - 5 b^2.
  Rational norm() const { return a_ * a_ - 5 * b_ * b_; }
  QSqrt5 inverse() const;

  /// Exact sign in {-1, 0, 1} of the real number a + b*sqrt(5).
  int sign() const;
  double to_double() const;
  std::string to_string() const;

  QSqrt5& operator+=(const QSqrt5& o) { a_ += o.a_; b_ += o.b_; return *this; }
  QSqrt5& operator-=(const QSqrt5& o) { a_ -= o.a_; b_ -= o.b_; return *this; }
  QSqrt5& operator*=(const QSqrt5& o);
  QSqrt5& operator/=(const QSqrt5& o) { return *this *= o.inverse(); }

  friend QSqrt5 operator+(QSqrt5 x, const QSqrt5& y) { return x += y; }
  friend QSqrt5 operator-(QSqrt5 x, const QSqrt5& y) { return x -= y; }
  friend QSqrt5 operator*(QSqrt5 x, const QSqrt5& y) { return x *= y; }
  friend QSqrt5 operator/(QSqrt5 x, const QSqrt5& y) { return x /= y; }
  friend QSqrt5 operator-(const QSqrt5& x) { return {-x.a_, -x.b_}; }

  friend bool operator==(const QSqrt5& x, const QSqrt5& y) { return x.a_ == y.a_ && x.b_ == y.b_; }
  friend bool operator!=(const QSqrt5& x, const QSqrt5& y) { return !(x == y); }
  friend bool operator<(const QSqrt5& x, const QSqrt5& y) { return (x - y).sign() < 0; }
  friend bool operator>(const QSqrt5& x, const QSqrt5& y) { return y < x; }

 private:
  Rational a_{0};
  Rational b_{0};
};

}  // namespace k3dyn
