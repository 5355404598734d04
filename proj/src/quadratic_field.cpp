#include "k3dyn/quadratic_field.hpp"

#include <cmath>

#include "k3dyn/errors.hpp"

namespace k3dyn {

QSqrt5& QSqrt5::operator*=(const QSqrt5& o) {
  Rational a = a_ * o.a_ + 5 * b_ * o.b_;
  Rational b = a_ * o.b_ + b_ * o.a_;
  a_ = std::move(a);
  b_ = std::move(b);
  return *this;
}

QSqrt5 QSqrt5::inverse() const {
  Rational n = norm();
  // sqrt(5) is irrational, so the norm vanishes only at zero.
  if (n == 0) throw Error(ErrorKind::invalid_argument, "division by zero in Q(sqrt5)");
  return {a_ / n, -b_ / n};
}

int QSqrt5::sign() const {
  int sa = sgn(a_);
  int sb = sgn(b_);
  if (sb == 0) return sa;
  if (sa == 0) return sb;
  if (sa == sb) return sa;
  // Opposite signs: the larger of a^2 and 5 b^2 decides.
  int cmp_sq = cmp(a_ * a_, 5 * b_ * b_);
  return cmp_sq > 0 ? sa : sb;
}

double QSqrt5::to_double() const { return a_.get_d() + b_.get_d() * std::sqrt(5.0); }

std::string QSqrt5::to_string() const {
  if (b_ == 0) return k3dyn::to_string(a_);
  std::string s;
  if (a_ != 0) s = k3dyn::to_string(a_) + (sgn(b_) > 0 ? "+" : "-");
  else if (sgn(b_) < 0) s = "-";
  Rational mag = abs(b_);
  if (mag != 1) s += k3dyn::to_string(mag) + "*";
  return s + "sqrt5";
}

}  // namespace k3dyn
