#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kwise/errors.hpp"
#include "kwise/interval.hpp"
#include "kwise/rational.hpp"
#include "kwise/sample_space.hpp"

namespace kwise {

/// Coefficient vector a of a weighted Rademacher sum; never identically zero.
class Weights {
 public:
  explicit Weights(std::vector<Rational> a) : a_(std::move(a)) {
    if (a_.empty()) throw InvalidArgument("weight vector must be nonempty");
    bool nonzero = false;
    for (const Rational& v : a_) nonzero = nonzero || v != 0;
    if (!nonzero) throw InvalidArgument("weight vector must not be identically zero");
  }

  static Weights ones(unsigned n) { return Weights(std::vector<Rational>(n, Rational(1))); }

  std::size_t size() const { return a_.size(); }
  const Rational& operator[](std::size_t i) const { return a_[i]; }
  std::span<const Rational> values() const { return a_; }

  Rational norm2_squared() const {
    Rational s;
    for (const Rational& v : a_) s += v * v;
    return s;
  }

  /// <a, x> for a sign vector given as a bitmask (bit set = +1).
  Rational dot(std::uint64_t bits) const {
    Rational s;
    for (std::size_t i = 0; i < a_.size(); ++i) {
      if (((bits >> i) & 1U) != 0)
        s += a_[i];
      else
        s -= a_[i];
    }
    return s;
  }

  Weights scaled(const Rational& c) const {
    std::vector<Rational> out(a_);
    for (Rational& v : out) v *= c;
    return Weights(std::move(out));
  }

 private:
  std::vector<Rational> a_;
};

using MomentValue = std::variant<Rational, Interval>;

struct MomentResult {
  Rational p;
  /// Exact for integer p, a certified enclosure otherwise.
  MomentValue value;
  /// Enclosure of value^(1/p) / ||a||_2.
  Interval ratio;

  bool exact() const { return std::holds_alternative<Rational>(value); }
};

struct PrecisionOptions {
  mpfr_prec_t initial_precision = kDefaultPrecision;
  mpfr_prec_t max_precision = mpfr_prec_t{1} << 16;
  /// Target relative enclosure width for irrational results.
  double relative_tolerance = std::ldexp(1.0, -60);
};

inline Interval to_interval(const MomentValue& v, mpfr_prec_t prec) {
  if (const auto* q = std::get_if<Rational>(&v)) return Interval::exact(*q, prec);
  return std::get<Interval>(v);
}

namespace detail {

inline void check_exponent(const Rational& p) {
  if (p < 1) throw InvalidArgument("moment exponent must be >= 1, got " + to_string(p));
}

inline void check_weights(const SampleSpace& space, const Weights& a) {
  if (a.size() != space.dimension())
    throw DimensionMismatch("weight vector has length " + std::to_string(a.size()) + " but the space has dimension " +
                            std::to_string(space.dimension()));
}

/// Runs eval(prec) at doubling precision until the enclosure is tight enough.
template <class Eval>
Interval adaptive(Eval&& eval, const PrecisionOptions& opts) {
  mpfr_prec_t prec = opts.initial_precision;
  while (true) {
    Interval out = eval(prec);
    if (out.relative_width() <= opts.relative_tolerance || prec >= opts.max_precision) return out;
    prec *= 2;
  }
}

/// Enclosure of value^(1/p) / sqrt(s) where s = ||a||_2^2.
inline Interval ratio_from_moment(const MomentValue& value, const Rational& p, const Rational& s, mpfr_prec_t prec) {
  if (const auto* q = std::get_if<Rational>(&value); q != nullptr && is_integer(p)) {
    // ratio^(2p) = value^2 / s^p is rational, so a single correctly rounded root suffices.
    const unsigned long e = p.get_num().get_ui();
    return Interval::exact((*q) * (*q) / pow(s, e), prec).nth_root(2 * e);
  }
  return to_interval(value, prec).pow(Rational(1) / p) / Interval::exact(s, prec).sqrt();
}

}  // namespace detail

/// E|sum_i a_i eps_i|^p over the space.
inline MomentResult pth_moment(const SampleSpace& space, const Weights& a, const Rational& p,
                               const PrecisionOptions& opts = {}) {
  detail::check_exponent(p);
  detail::check_weights(space, a);
  const Rational s = a.norm2_squared();

  if (is_integer(p)) {
    const unsigned long e = p.get_num().get_ui();
    Rational total;
    for (const Atom& atom : space.atoms()) {
      const Rational dot = a.dot(atom.bits);
      if (dot != 0) total += atom.prob * pow(abs(dot), e);
    }
    Interval ratio = detail::ratio_from_moment(total, p, s, opts.initial_precision);
    return {p, std::move(total), std::move(ratio)};
  }

  std::vector<Rational> dots;
  dots.reserve(space.support_size());
  for (const Atom& atom : space.atoms()) dots.push_back(abs(a.dot(atom.bits)));
  Interval value = detail::adaptive(
      [&](mpfr_prec_t prec) {
        Interval sum = Interval::exact(Rational(0), prec);
        for (std::size_t i = 0; i < dots.size(); ++i) {
          if (dots[i] == 0) continue;
          sum = sum + Interval::exact(space.atoms()[i].prob, prec) * Interval::exact(dots[i], prec).pow(p);
        }
        return sum;
      },
      opts);
  const mpfr_prec_t prec = value.precision();
  Interval ratio = detail::ratio_from_moment(value, p, s, prec);
  return {p, std::move(value), std::move(ratio)};
}

/// E(sum_i a_i e_i)^p for mutually independent signs, p even, without enumerating 2^N atoms.
/// Organizes the multinomial expansion (only all-even multi-indices survive) as a product of
/// truncated series sum_t a_i^{2t} x^{2t} / (2t)!, then multiplies the x^p coefficient by p!.
inline Rational even_moment_independent(const Weights& a, unsigned p) {
  if (p == 0 || p % 2 != 0) throw InvalidArgument("even_moment_independent needs a positive even p");
  const unsigned half = p / 2;
  std::vector<Rational> inv_even_factorial(half + 1);
  {
    BigInt f = 1;
    for (unsigned t = 0; t <= half; ++t) {
      if (t > 0) f *= BigInt(2 * t - 1) * BigInt(2 * t);
      inv_even_factorial[t] = Rational(BigInt(1), f);
    }
  }
  // series[d] = coefficient of x^{2d} accumulated over the coordinates seen so far.
  std::vector<Rational> series(half + 1);
  series[0] = 1;
  for (const Rational& ai : a.values()) {
    if (ai == 0) continue;
    const Rational sq = ai * ai;
    std::vector<Rational> next(half + 1);
    for (unsigned d = 0; d <= half; ++d) {
      if (series[d] == 0) continue;
      Rational power = 1;
      for (unsigned t = 0; d + t <= half; ++t) {
        next[d + t] += series[d] * power * inv_even_factorial[t];
        power *= sq;
      }
    }
    series = std::move(next);
  }
  BigInt pf;
  mpz_fac_ui(pf.get_mpz_t(), p);
  return series[half] * Rational(pf);
}

/// Certified enclosure of (E|<a,eps>|^p)^(1/p) / ||a||_2.
inline Interval khintchine_ratio(const SampleSpace& space, const Weights& a, const Rational& p,
                                 const PrecisionOptions& opts = {}) {
  return pth_moment(space, a, p, opts).ratio;
}

}  // namespace kwise
