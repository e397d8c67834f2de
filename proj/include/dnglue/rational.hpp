#pragma once

#include <gmpxx.h>

#include <cctype>
#include <cstdlib>
#include <string>
#include <string_view>

#include "dnglue/errors.hpp"

namespace dnglue {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "p/q", an integer, or a finite decimal such as "-1.25" or "3e-2"
/// into an exact rational. No rounding happens anywhere.
inline Rational parse_rational(std::string_view text) {
  const std::string s(text);
  if (s.empty()) throw std::invalid_argument("empty number");

  if (auto slash = s.find('/'); slash != std::string::npos) {
    Rational q;
    if (q.set_str(s, 10) != 0 || s.find('/', slash + 1) != std::string::npos)
      throw std::invalid_argument("malformed rational '" + s + "'");
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
    q.canonicalize();
    return q;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';

  std::string digits;
  long scale = 0;  // value = digits * 10^(-scale)
  bool seen_point = false;
  bool seen_digit = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) ++scale;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!seen_digit) throw std::invalid_argument("malformed number '" + s + "'");

  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw std::invalid_argument("malformed number '" + s + "'");
    const std::string exponent = s.substr(pos + 1);
    if (exponent.empty()) throw std::invalid_argument("malformed exponent in '" + s + "'");
    char* end = nullptr;
    const long e = std::strtol(exponent.c_str(), &end, 10);
    if (*end != '\0' || e > 4096 || e < -4096)
      throw std::invalid_argument("malformed exponent in '" + s + "'");
    scale -= e;
  }

  Integer numerator(digits, 10);
  Integer power;
  mpz_ui_pow_ui(power.get_mpz_t(), 10, static_cast<unsigned long>(scale < 0 ? -scale : scale));
  Rational q = scale >= 0 ? Rational(numerator, power) : Rational(numerator * power, 1);
  q.canonicalize();
  return negative ? Rational(-q) : q;
}

inline std::string to_string(const Rational& q) { return q.get_str(10); }

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact integer power of a rational, exponent may be negative.
inline Rational pow(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    Rational inv = 1 / base;
    return pow(inv, -exponent);
  }
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), static_cast<unsigned long>(exponent));
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace dnglue
