#include "k3dyn/rational.hpp"

#include <cctype>
#include <cmath>

#include "k3dyn/errors.hpp"

namespace k3dyn {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::not_symmetric: return "not_symmetric";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::not_negative_definite: return "not_negative_definite";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::degenerate_fiber: return "degenerate_fiber";
    case ErrorKind::singular_point: return "singular_point";
    case ErrorKind::chart_failure: return "chart_failure";
    case ErrorKind::estimator: return "estimator";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
    case ErrorKind::invariant_violation: return "invariant_violation";
  }
  return "unknown";
}

std::string to_string(const Rational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

Integer parse_integer(std::string_view s) {
  std::string_view body = s;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) body.remove_prefix(1);
  if (!all_digits(body)) throw Error(ErrorKind::invalid_argument, "not an integer: '" + std::string(s) + "'");
  std::string text(s);
  if (text.front() == '+') text.erase(0, 1);
  return Integer(text, 10);
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error(ErrorKind::invalid_argument, "empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    Integer num = parse_integer(text.substr(0, slash));
    Integer den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw Error(ErrorKind::invalid_argument, "zero denominator in '" + std::string(text) + "'");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac))
      throw Error(ErrorKind::invalid_argument, "not a rational: '" + std::string(text) + "'");
    Integer num(std::string(whole.empty() ? "0" : whole) + std::string(frac), 10);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational q(negative ? Integer(-num) : num, den);
    q.canonicalize();
    return q;
  }
  return Rational(parse_integer(text));
}

double log_abs(const Integer& z) {
  if (z == 0) return -HUGE_VAL;
  long exponent = 0;
  double mantissa = mpz_get_d_2exp(&exponent, z.get_mpz_t());
  return std::log(std::fabs(mantissa)) + static_cast<double>(exponent) * std::log(2.0);
}

double log_abs(const Rational& q) {
  if (q == 0) return -HUGE_VAL;
  return log_abs(q.get_num()) - log_abs(q.get_den());
}

}  // namespace k3dyn
