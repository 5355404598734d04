#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace k3dyn {

using Integer = mpz_class;
using Rational = mpq_class;

/// Canonical "p/q" text, or "p" when the denominator is one.
std::string to_string(const Rational& q);

/// Parses "p", "p/q" or a decimal literal such as "-1.25". Throws Error on junk.
Rational parse_rational(std::string_view text);

/// log|q| that stays finite for values far outside the double range.
double log_abs(const Rational& q);
double log_abs(const Integer& z);

inline int sign(const Rational& q) { return sgn(q); }

}  // namespace k3dyn
