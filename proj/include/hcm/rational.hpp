#pragma once

#include <cctype>
#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

namespace hcm {

using Integer = boost::multiprecision::mpz_int;
using Rational = boost::multiprecision::mpq_rational;

/// 50 significant decimal digits; used where exact rationals meet
/// transcendental right-hand sides (powers with rational exponents).
using Wide = boost::multiprecision::mpfr_float_50;

/// Parses "p/q", an integer, or a decimal such as "0.05" or "2.5e-3" into an
/// exact rational. Decimals are read exactly, not through binary floating point.
inline Rational parse_rational(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
  };
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) fail();

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    auto is_int = [](std::string_view s) {
      if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
      if (s.empty()) return false;
      for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
      return true;
    };
    if (!is_int(num) || !is_int(den)) fail();
    Integer p(std::string(num.front() == '+' ? num.substr(1) : num));
    Integer q(std::string(den.front() == '+' ? den.substr(1) : den));
    if (q == 0) throw std::domain_error("zero denominator in '" + std::string(text) + "'");
    return Rational(p, q);
  }

  // Decimal with optional exponent.
  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    auto exp_part = text.substr(e + 1);
    if (!exp_part.empty() && exp_part.front() == '+') exp_part.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(exp_part.data(), exp_part.data() + exp_part.size(), exponent);
    if (ec != std::errc{} || ptr != exp_part.data() + exp_part.size()) fail();
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  bool seen_point = false;
  bool seen_digit = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_point) fail();
      seen_point = true;
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      seen_digit = true;
      if (seen_point) --exponent;
    } else {
      fail();
    }
  }
  if (!seen_digit) fail();
  // a leading zero would make the integer parser read octal
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  Integer value(digits);
  if (negative) value = -value;
  Integer scale = boost::multiprecision::pow(Integer(10), static_cast<unsigned>(exponent < 0 ? -exponent : exponent));
  return exponent < 0 ? Rational(value, scale) : Rational(value * scale);
}

/// Canonical "p/q" form (q >= 1, always present).
inline std::string to_string(const Rational& r) {
  return boost::multiprecision::numerator(r).str() + "/" + boost::multiprecision::denominator(r).str();
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

inline Wide to_wide(const Rational& r) { return Wide(r); }

}  // namespace hcm
