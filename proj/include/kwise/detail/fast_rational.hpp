#pragma once

#include <gmpxx.h>

#include <bit>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <utility>

#include "kwise/rational.hpp"

namespace kwise::detail {

using i128 = __int128;
using u128 = unsigned __int128;

inline int ctz128(u128 x) {
  const auto low = static_cast<std::uint64_t>(x);
  return low != 0 ? __builtin_ctzll(low) : 64 + __builtin_ctzll(static_cast<std::uint64_t>(x >> 64));
}

inline u128 gcd128(u128 a, u128 b) {
  if (a == 0) return b;
  if (b == 0) return a;
  const int shift = ctz128(a | b);
  a >>= ctz128(a);
  do {
    b >>= ctz128(b);
    if (a > b) std::swap(a, b);
    b -= a;
  } while (b != 0);
  return a << shift;
}

inline u128 abs128(i128 v) { return v < 0 ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v); }

inline bool fits64(i128 v) {
  return v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max();
}

/// Exact rational with an inline int64 numerator/denominator and a GMP fallback once either
/// part overflows. Simplex tableau entries over +-1 constraint matrices stay small, so nearly
/// all arithmetic runs on machine words.
class FastRational {
 public:
  FastRational() = default;
  explicit FastRational(long v) : num_(v) {}
  explicit FastRational(const Rational& q) { assign(q); }

  FastRational(const FastRational& o) : num_(o.num_), den_(o.den_) {
    if (o.big_) big_ = std::make_unique<mpq_class>(*o.big_);
  }
  FastRational(FastRational&&) noexcept = default;
  FastRational& operator=(const FastRational& o) {
    if (this == &o) return *this;
    num_ = o.num_;
    den_ = o.den_;
    if (o.big_) {
      if (big_)
        *big_ = *o.big_;
      else
        big_ = std::make_unique<mpq_class>(*o.big_);
    } else {
      big_.reset();
    }
    return *this;
  }
  FastRational& operator=(FastRational&&) noexcept = default;

  void assign(const Rational& q) {
    if (q.get_num().fits_slong_p() && q.get_den().fits_slong_p()) {
      big_.reset();
      num_ = q.get_num().get_si();
      den_ = q.get_den().get_si();
    } else {
      big_ = std::make_unique<mpq_class>(q);
    }
  }

  Rational to_rational() const {
    if (big_) return *big_;
    Rational q(num_, den_);
    return q;
  }

  int sign() const {
    if (big_) return sgn(*big_);
    return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0);
  }
  bool is_zero() const { return big_ ? sgn(*big_) == 0 : num_ == 0; }
  /// Rough storage size in bits; used to prefer cheap pivots.
  std::size_t bit_size() const {
    if (big_) return mpz_sizeinbase(big_->get_num_mpz_t(), 2) + mpz_sizeinbase(big_->get_den_mpz_t(), 2);
    return static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(abs128(num_))) +
                                    std::bit_width(static_cast<std::uint64_t>(den_)));
  }

  friend int compare(const FastRational& a, const FastRational& b) {
    if (!a.big_ && !b.big_) {
      const i128 lhs = static_cast<i128>(a.num_) * b.den_;
      const i128 rhs = static_cast<i128>(b.num_) * a.den_;
      return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
    }
    return cmp(a.to_rational(), b.to_rational());
  }
  friend bool operator==(const FastRational& a, const FastRational& b) { return compare(a, b) == 0; }

  static FastRational mul(const FastRational& a, const FastRational& b) {
    if (!a.big_ && !b.big_) {
      if (a.num_ == 0 || b.num_ == 0) return FastRational();
      const auto g1 = static_cast<std::int64_t>(gcd128(abs128(a.num_), static_cast<u128>(b.den_)));
      const auto g2 = static_cast<std::int64_t>(gcd128(abs128(b.num_), static_cast<u128>(a.den_)));
      const i128 n = static_cast<i128>(a.num_ / g1) * (b.num_ / g2);
      const i128 d = static_cast<i128>(a.den_ / g2) * (b.den_ / g1);
      FastRational out;
      if (out.set_small(n, d)) return out;
    }
    FastRational out;
    out.big_ = std::make_unique<mpq_class>(a.to_rational() * b.to_rational());
    out.demote();
    return out;
  }

  static FastRational div(const FastRational& a, const FastRational& b) { return mul(a, b.reciprocal()); }

  FastRational reciprocal() const {
    FastRational out;
    if (!big_) {
      if (num_ == 0) throw InternalError("division by zero in simplex");
      out.num_ = num_ < 0 ? -den_ : den_;
      out.den_ = num_ < 0 ? -num_ : num_;
      if (num_ != std::numeric_limits<std::int64_t>::min()) return out;
    }
    out.big_ = std::make_unique<mpq_class>(1 / to_rational());
    out.demote();
    return out;
  }

  void negate() {
    if (big_) {
      *big_ = -*big_;
    } else if (num_ == std::numeric_limits<std::int64_t>::min()) {
      big_ = std::make_unique<mpq_class>(-to_rational());
    } else {
      num_ = -num_;
    }
  }

  /// *this -= f * p.
  void sub_mul(const FastRational& f, const FastRational& p) {
    const FastRational prod = mul(f, p);
    if (!big_ && !prod.big_) {
      i128 n;
      i128 d;
      if (den_ == prod.den_) {
        n = static_cast<i128>(num_) - prod.num_;
        d = den_;
      } else {
        n = static_cast<i128>(num_) * prod.den_ - static_cast<i128>(prod.num_) * den_;
        d = static_cast<i128>(den_) * prod.den_;
      }
      if (set_small_reduce(n, d)) return;
    }
    Rational r = to_rational() - prod.to_rational();
    big_ = std::make_unique<mpq_class>(std::move(r));
    demote();
  }

  /// *this += f * p.
  void add_mul(const FastRational& f, const FastRational& p) {
    FastRational neg(f);
    neg.negate();
    sub_mul(neg, p);
  }

 private:
  bool set_small(i128 n, i128 d) {
    if (!fits64(n) || !fits64(d)) return false;
    big_.reset();
    num_ = static_cast<std::int64_t>(n);
    den_ = static_cast<std::int64_t>(d);
    return true;
  }

  bool set_small_reduce(i128 n, i128 d) {
    if (n == 0) return set_small(0, 1);
    const u128 g = gcd128(abs128(n), static_cast<u128>(d));
    if (g > 1) {
      n /= static_cast<i128>(g);
      d /= static_cast<i128>(g);
    }
    return set_small(n, d);
  }

  void demote() {
    if (big_ && big_->get_num().fits_slong_p() && big_->get_den().fits_slong_p()) {
      num_ = big_->get_num().get_si();
      den_ = big_->get_den().get_si();
      big_.reset();
    }
  }

  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  std::unique_ptr<mpq_class> big_;
};

}  // namespace kwise::detail
