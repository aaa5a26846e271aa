#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <charconv>
#include <string>
#include <string_view>

#include "gvna/error.hpp"

namespace gvna {

using Integer = boost::multiprecision::cpp_int;

/// Exact rational scalar. Always stored in lowest terms with positive
/// denominator; every trace, norm and report value in this library is one.
using Rational = boost::multiprecision::cpp_rational;

inline Rational make_rational(long long num, long long den = 1) {
  if (den == 0) throw input_error("rational with zero denominator");
  return Rational(Integer(num), Integer(den));
}

inline Integer rational_num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer rational_den(const Rational& r) { return boost::multiprecision::denominator(r); }

/// "num/den", or just "num" when the denominator is 1.
inline std::string to_fraction_string(const Rational& r) {
  const Integer num = rational_num(r);
  const Integer den = rational_den(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

inline Rational parse_fraction(std::string_view text) {
  const auto slash = text.find('/');
  try {
    if (slash == std::string_view::npos) return Rational(Integer(std::string(text)));
    const Integer num{std::string(text.substr(0, slash))};
    const Integer den{std::string(text.substr(slash + 1))};
    if (den == 0) throw input_error("rational with zero denominator");
    return Rational(num, den);
  } catch (const std::exception&) {
    throw input_error("malformed rational: '" + std::string(text) + "'");
  }
}

/// Decimal rendering for CSV columns: shortest string that round-trips
/// through double. The exact value always travels alongside it.
inline std::string to_decimal_string(const Rational& r) {
  const double d = r.convert_to<double>();
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, d);
  return std::string(buf, res.ptr);
}

}  // namespace gvna
