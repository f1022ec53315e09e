#pragma once

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "kwise/errors.hpp"
#include "kwise/rational.hpp"

namespace kwise {

inline constexpr mpfr_prec_t kDefaultPrecision = 128;

/// RAII wrapper around an mpfr_t carrying its own precision.
class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec = kDefaultPrecision) {
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(const Rational& q, mpfr_rnd_t rnd, mpfr_prec_t prec = kDefaultPrecision) {
    mpfr_init2(v_, prec);
    mpfr_set_q(v_, q.get_mpq_t(), rnd);
  }
  BigFloat(double d, mpfr_prec_t prec) {
    mpfr_init2(v_, prec);
    mpfr_set_d(v_, d, MPFR_RNDN);
  }
  BigFloat(const BigFloat& other) {
    mpfr_init2(v_, other.precision());
    mpfr_set(v_, other.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
  }
  BigFloat& operator=(const BigFloat& other) {
    if (this != &other) {
      mpfr_set_prec(v_, other.precision());
      mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
  }
  BigFloat& operator=(BigFloat&& other) noexcept {
    mpfr_swap(v_, other.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }
  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  bool is_finite() const { return mpfr_number_p(v_) != 0; }
  double to_double(mpfr_rnd_t rnd = MPFR_RNDN) const { return mpfr_get_d(v_, rnd); }

  /// Exact value of a finite float.
  Rational to_rational() const {
    if (!is_finite()) throw InternalError("non-finite BigFloat has no rational value");
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v_);
    return q;
  }

  /// Scientific decimal rounded in direction rnd; digits < 0 picks enough digits for the precision.
  std::string to_decimal(mpfr_rnd_t rnd = MPFR_RNDN, int digits = -1) const {
    if (digits < 0) digits = static_cast<int>(std::ceil(static_cast<double>(precision()) * 0.30103)) + 1;
    char* buf = nullptr;
    const char* fmt = rnd == MPFR_RNDD ? "%.*RDe" : rnd == MPFR_RNDU ? "%.*RUe" : "%.*RNe";
    if (mpfr_asprintf(&buf, fmt, digits, v_) < 0) throw InternalError("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
  }

  friend int compare(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.v_, b.v_); }
  friend int compare(const BigFloat& a, const Rational& b) { return mpfr_cmp_q(a.v_, b.get_mpq_t()); }
  friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
  friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
  friend bool operator>(const BigFloat& a, const BigFloat& b) { return b < a; }
  friend bool operator>=(const BigFloat& a, const BigFloat& b) { return b <= a; }
  friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

 private:
  mpfr_t v_;
};

/// Closed interval [lo, hi] with outward-rounded endpoints; every operation returns an
/// enclosure of the exact result over all real inputs in the operand intervals.
class Interval {
 public:
  explicit Interval(mpfr_prec_t prec = kDefaultPrecision) : lo_(prec), hi_(prec) {}
  Interval(BigFloat lo, BigFloat hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
    if (!(lo_ <= hi_)) throw InternalError("interval with lo > hi");
  }

  static Interval exact(const Rational& q, mpfr_prec_t prec = kDefaultPrecision) {
    return Interval(BigFloat(q, MPFR_RNDD, prec), BigFloat(q, MPFR_RNDU, prec));
  }

  static Interval pi(mpfr_prec_t prec = kDefaultPrecision) {
    BigFloat lo(prec), hi(prec);
    mpfr_const_pi(lo.raw(), MPFR_RNDD);
    mpfr_const_pi(hi.raw(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }

  const BigFloat& lo() const { return lo_; }
  const BigFloat& hi() const { return hi_; }
  mpfr_prec_t precision() const { return std::max(lo_.precision(), hi_.precision()); }

  BigFloat width() const {
    BigFloat w(precision());
    mpfr_sub(w.raw(), hi_.raw(), lo_.raw(), MPFR_RNDU);
    return w;
  }

  /// Width divided by the larger endpoint magnitude (absolute width when the interval straddles zero).
  double relative_width() const {
    BigFloat w = width();
    BigFloat scale(precision());
    BigFloat alo(precision());
    mpfr_abs(alo.raw(), lo_.raw(), MPFR_RNDN);
    mpfr_abs(scale.raw(), hi_.raw(), MPFR_RNDN);
    if (scale < alo) scale = alo;
    if (mpfr_zero_p(scale.raw())) return 0.0;
    if (mpfr_sgn(lo_.raw()) <= 0 && mpfr_sgn(hi_.raw()) >= 0) return w.to_double(MPFR_RNDU);
    mpfr_div(w.raw(), w.raw(), scale.raw(), MPFR_RNDU);
    return w.to_double(MPFR_RNDU);
  }

  BigFloat midpoint() const {
    BigFloat m(precision() + 1);
    mpfr_add(m.raw(), lo_.raw(), hi_.raw(), MPFR_RNDN);
    mpfr_div_2ui(m.raw(), m.raw(), 1, MPFR_RNDN);
    return m;
  }

  bool is_point() const { return lo_ == hi_; }
  bool contains(const Rational& q) const { return compare(lo_, q) <= 0 && compare(hi_, q) >= 0; }
  bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
  bool overlaps(const Interval& o) const { return lo_ <= o.hi_ && o.lo_ <= hi_; }
  /// Every point of *this is strictly below every point of o.
  bool certainly_less(const Interval& o) const { return hi_ < o.lo_; }

  friend Interval operator+(const Interval& a, const Interval& b) {
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    BigFloat lo(prec), hi(prec);
    mpfr_add(lo.raw(), a.lo_.raw(), b.lo_.raw(), MPFR_RNDD);
    mpfr_add(hi.raw(), a.hi_.raw(), b.hi_.raw(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }

  friend Interval operator-(const Interval& a, const Interval& b) {
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    BigFloat lo(prec), hi(prec);
    mpfr_sub(lo.raw(), a.lo_.raw(), b.hi_.raw(), MPFR_RNDD);
    mpfr_sub(hi.raw(), a.hi_.raw(), b.lo_.raw(), MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }

  friend Interval operator*(const Interval& a, const Interval& b) {
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    BigFloat lo(prec), hi(prec), t(prec);
    bool first = true;
    for (const BigFloat* x : {&a.lo_, &a.hi_}) {
      for (const BigFloat* y : {&b.lo_, &b.hi_}) {
        mpfr_mul(t.raw(), x->raw(), y->raw(), MPFR_RNDD);
        if (first || t < lo) lo = t;
        mpfr_mul(t.raw(), x->raw(), y->raw(), MPFR_RNDU);
        if (first || hi < t) hi = t;
        first = false;
      }
    }
    return {std::move(lo), std::move(hi)};
  }

  friend Interval operator/(const Interval& a, const Interval& b) {
    if (mpfr_sgn(b.lo_.raw()) <= 0 && mpfr_sgn(b.hi_.raw()) >= 0)
      throw InvalidArgument("interval division by an interval containing zero");
    const mpfr_prec_t prec = std::max(a.precision(), b.precision());
    BigFloat lo(prec), hi(prec), t(prec);
    bool first = true;
    for (const BigFloat* x : {&a.lo_, &a.hi_}) {
      for (const BigFloat* y : {&b.lo_, &b.hi_}) {
        mpfr_div(t.raw(), x->raw(), y->raw(), MPFR_RNDD);
        if (first || t < lo) lo = t;
        mpfr_div(t.raw(), x->raw(), y->raw(), MPFR_RNDU);
        if (first || hi < t) hi = t;
        first = false;
      }
    }
    return {std::move(lo), std::move(hi)};
  }

  Interval sqrt() const { return nth_root(2); }

  /// Enclosure of x^(1/n) over a nonnegative interval.
  Interval nth_root(unsigned long n) const {
    require_nonnegative("nth_root");
    if (n == 0) throw InvalidArgument("zeroth root");
    BigFloat lo(precision()), hi(precision());
    mpfr_rootn_ui(lo.raw(), lo_.raw(), n, MPFR_RNDD);
    mpfr_rootn_ui(hi.raw(), hi_.raw(), n, MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }

  /// Enclosure of x^e over a nonnegative interval.
  Interval pow(unsigned long e) const {
    require_nonnegative("pow");
    BigFloat lo(precision()), hi(precision());
    mpfr_pow_ui(lo.raw(), lo_.raw(), e, MPFR_RNDD);
    mpfr_pow_ui(hi.raw(), hi_.raw(), e, MPFR_RNDU);
    return {std::move(lo), std::move(hi)};
  }

  /// Enclosure of x^e for a rational exponent e = u/v, evaluated as (x^u)^(1/v); both steps are
  /// monotone on x >= 0 so directed rounding composes. Negative e requires x > 0.
  Interval pow(const Rational& e) const {
    require_nonnegative("pow");
    if (e == 0) return exact(Rational(1), precision());
    if (e < 0) {
      if (mpfr_zero_p(lo_.raw())) throw InvalidArgument("negative power of an interval containing zero");
      return exact(Rational(1), precision()) / pow(Rational(-e));
    }
    if (!e.get_num().fits_ulong_p() || !e.get_den().fits_ulong_p())
      throw InvalidArgument("exponent too large: " + to_string(e));
    Interval out = pow(e.get_num().get_ui());
    const unsigned long den = e.get_den().get_ui();
    return den == 1 ? out : out.nth_root(den);
  }

 private:
  void require_nonnegative(const char* what) const {
    if (mpfr_sgn(lo_.raw()) < 0) throw InvalidArgument(std::string(what) + " of an interval with negative part");
  }

  BigFloat lo_;
  BigFloat hi_;
};

/// Enclosure of |q|^e for rational q and rational e > 0.
inline Interval abs_pow(const Rational& q, const Rational& e, mpfr_prec_t prec = kDefaultPrecision) {
  return Interval::exact(abs(q), prec).pow(e);
}

}  // namespace kwise
