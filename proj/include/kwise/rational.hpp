#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

#include "kwise/errors.hpp"

namespace kwise {

/// Exact arbitrary-precision rational; gmpxx keeps values canonical after every operation.
using Rational = mpq_class;
using BigInt = mpz_class;

inline Rational make_rational(long num, long den = 1) {
  if (den == 0) throw InvalidArgument("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// "num/den" in lowest terms; integers keep the "/1" suffix.
inline std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

inline bool is_even_integer(const Rational& r) {
  return is_integer(r) && mpz_even_p(r.get_num_mpz_t()) != 0;
}

inline Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

inline Rational pow(const Rational& base, unsigned long e) {
  Rational out;
  mpz_pow_ui(out.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(out.get_den_mpz_t(), base.get_den_mpz_t(), e);
  out.canonicalize();
  return out;
}

inline BigInt binomial(unsigned long n, unsigned long k) {
  BigInt out;
  if (k > n) return out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

/// Integer value of r, which must be an integer that fits in a long.
inline long to_long(const Rational& r) {
  if (!is_integer(r) || !r.get_num().fits_slong_p())
    throw InvalidArgument("expected a machine-sized integer, got " + to_string(r));
  return r.get_num().get_si();
}

namespace detail {

inline bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

inline BigInt parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw ParseError("not an integer: '" + std::string(s) + "'");
  BigInt v(std::string(s), 10);
  return negative ? BigInt(-v) : v;
}

inline BigInt pow10(unsigned long e) {
  BigInt out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, e);
  return out;
}

}  // namespace detail

/// Parses "a", "a/b", or a decimal such as "-2.5" or "1e-3"; decimals are read exactly.
inline Rational parse_rational(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
  if (text.empty()) throw ParseError("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = detail::parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!detail::all_digits(den_text)) throw ParseError("bad denominator in '" + std::string(text) + "'");
    BigInt den(std::string(den_text), 10);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  std::string_view mantissa = text;
  long exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    BigInt ex = detail::parse_integer(text.substr(e + 1));
    if (!ex.fits_slong_p() || ex > 100000 || ex < -100000) throw ParseError("exponent out of range");
    exponent = ex.get_si();
  }

  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  if (auto dot = mantissa.find('.'); dot != std::string_view::npos) {
    std::string_view whole = mantissa.substr(0, dot);
    std::string_view frac = mantissa.substr(dot + 1);
    if ((whole.empty() && frac.empty()) || (!whole.empty() && !detail::all_digits(whole)) ||
        (!frac.empty() && !detail::all_digits(frac)))
      throw ParseError("not a number: '" + std::string(text) + "'");
    digits = std::string(whole) + std::string(frac);
    exponent -= static_cast<long>(frac.size());
  } else {
    if (!detail::all_digits(mantissa)) throw ParseError("not a number: '" + std::string(text) + "'");
    digits = std::string(mantissa);
  }
  if (digits.empty()) digits = "0";

  Rational r(BigInt(digits, 10));
  if (exponent > 0) r *= detail::pow10(static_cast<unsigned long>(exponent));
  if (exponent < 0) r /= detail::pow10(static_cast<unsigned long>(-exponent));
  r.canonicalize();
  return negative ? Rational(-r) : r;
}

}  // namespace kwise
