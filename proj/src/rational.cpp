#include "loometric/rational.hpp"
#include "loometric/errors.hpp"

#include <cctype>
#include <cstdlib>
#include <regex>
#include <stdexcept>

namespace loometric {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

mpz_class parse_integer(const std::string& digits) {
  mpz_class z;
  if (z.set_str(digits[0] == '+' ? digits.substr(1) : digits, 10) != 0) {
    throw std::invalid_argument("malformed integer '" + digits + "'");
  }
  return z;
}

mpz_class pow10(unsigned long e) {
  mpz_class p;
  mpz_ui_pow_ui(p.get_mpz_t(), 10, e);
  return p;
}

} // namespace

Rational parse_rational(std::string_view text) {
  static const std::regex integer_re(R"([+-]?\d+)");
  static const std::regex decimal_re(R"(([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?)");
  constexpr long max_exponent = 4096;

  const std::string s(trim(text));
  if (s.empty()) throw std::invalid_argument("empty rational literal");

  if (const auto slash = s.find('/'); slash != std::string::npos) {
    const std::string num(trim(std::string_view(s).substr(0, slash)));
    const std::string den(trim(std::string_view(s).substr(slash + 1)));
    if (!std::regex_match(num, integer_re) || !std::regex_match(den, integer_re)) {
      throw std::invalid_argument("malformed rational '" + s + "'");
    }
    const mpz_class q = parse_integer(den);
    if (q == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    Rational r(parse_integer(num), q);
    r.canonicalize();
    return r;
  }

  std::smatch m;
  if (!std::regex_match(s, m, decimal_re) || (m[2].length() == 0 && m[3].length() == 0)) {
    throw std::invalid_argument("malformed number '" + s + "'");
  }
  const std::string digits = m[2].str() + m[3].str();
  long exponent = -static_cast<long>(m[3].length());
  if (m[4].matched) {
    const long e = std::strtol(m[4].str().c_str(), nullptr, 10);
    if (e > max_exponent || e < -max_exponent) throw std::invalid_argument("exponent out of range in '" + s + "'");
    exponent += e;
  }
  mpz_class mantissa = parse_integer(digits);
  if (m[1].str() == "-") mantissa = -mantissa;
  Rational r;
  if (exponent >= 0) {
    r = Rational(mantissa * pow10(static_cast<unsigned long>(exponent)));
  } else {
    r = Rational(mantissa, pow10(static_cast<unsigned long>(-exponent)));
    r.canonicalize();
  }
  return r;
}

std::string to_string(const Rational& value) { return value.get_str(); }

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::Shape: return "Shape";
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::NegativeEntry: return "NegativeEntry";
    case Errc::NonzeroDiagonal: return "NonzeroDiagonal";
    case Errc::Asymmetric: return "Asymmetric";
    case Errc::ZeroOffDiagonal: return "ZeroOffDiagonal";
    case Errc::TriangleViolation: return "TriangleViolation";
    case Errc::EmptyThresholds: return "EmptyThresholds";
    case Errc::NonDecreasingThresholds: return "NonDecreasingThresholds";
    case Errc::NonPositiveRadius: return "NonPositiveRadius";
    case Errc::TooSmall: return "TooSmall";
    case Errc::NotInjective: return "NotInjective";
    case Errc::GenericityExhausted: return "GenericityExhausted";
    case Errc::DimMismatch: return "DimMismatch";
    case Errc::EpsTooLarge: return "EpsTooLarge";
    case Errc::NotAPartition: return "NotAPartition";
    case Errc::NotACover: return "NotACover";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

} // namespace loometric
