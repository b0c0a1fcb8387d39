#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace loometric {

/// Exact rational number (GMP). Always kept in canonical lowest terms.
using Rational = mpq_class;

/// Parses an exact rational from "p/q", an integer, or a decimal literal with
/// optional exponent ("0.125", "-3.5e-2"). Decimals are converted exactly.
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical form: "p/q" in lowest terms with q > 0, or "p" when q == 1.
std::string to_string(const Rational& value);

inline Rational abs_diff(const Rational& a, const Rational& b) {
  Rational d = a - b;
  return d < 0 ? Rational(-d) : d;
}

} // namespace loometric
