#pragma once

#include <mpfr.h>

#include <string>

#include "kwise/errors.hpp"
#include "kwise/interval.hpp"
#include "kwise/rational.hpp"

namespace kwise {

namespace detail {

/// (m-1)!! for even m; equals E g^m for a standard Gaussian g.
inline BigInt odd_double_factorial_below(unsigned long m) {
  BigInt out = 1;
  for (unsigned long i = 1; i < m; i += 2) out *= i;
  return out;
}

/// Enclosure of Gamma(x) for x >= 3/2, where Gamma is increasing; MPFR rounds each endpoint correctly.
inline Interval gamma_increasing(const Rational& x, mpfr_prec_t prec) {
  if (x < Rational(3, 2)) throw InternalError("gamma_increasing needs x >= 3/2");
  const Interval arg = Interval::exact(x, prec);
  BigFloat lo(prec), hi(prec);
  mpfr_gamma(lo.raw(), arg.lo().raw(), MPFR_RNDD);
  mpfr_gamma(hi.raw(), arg.hi().raw(), MPFR_RNDU);
  return {std::move(lo), std::move(hi)};
}

}  // namespace detail

/// Best constant of the classical upper Khintchine inequality:
/// 1 for 0 < p <= 2, and sqrt(2) * (Gamma((p+1)/2) / sqrt(pi))^(1/p) for p > 2.
inline Interval haagerup_constant(const Rational& p, mpfr_prec_t prec = kDefaultPrecision) {
  if (p <= 0) throw InvalidArgument("Khintchine constant needs p > 0, got " + to_string(p));
  if (p <= 2) return Interval::exact(Rational(1), prec);

  if (is_even_integer(p)) {
    // Gamma(m + 1/2) / sqrt(pi) = (2m-1)!! / 2^m, so C(p)^p = (p-1)!! exactly.
    return Interval::exact(Rational(detail::odd_double_factorial_below(p.get_num().get_ui())), prec)
        .nth_root(p.get_num().get_ui());
  }

  const Rational x = (p + 1) / 2;
  Interval gamma(prec);
  if (is_integer(x)) {
    BigInt f;
    mpz_fac_ui(f.get_mpz_t(), x.get_num().get_ui() - 1);
    gamma = Interval::exact(Rational(f), prec);
  } else {
    gamma = detail::gamma_increasing(x, prec);
  }
  const Interval inner = gamma / Interval::pi(prec).sqrt();
  return Interval::exact(Rational(2), prec).sqrt() * inner.pow(Rational(1) / p);
}

/// Upper bound C(k)^(k/p) * N^(1/2 - k/(2p)) on C(N,p,k), valid for even k and p >= k >= 2.
inline Interval interpolation_bound(unsigned long n, const Rational& p, unsigned long k,
                                    mpfr_prec_t prec = kDefaultPrecision) {
  if (n == 0) throw InvalidArgument("interpolation bound needs N >= 1");
  if (k < 2 || k % 2 != 0) throw InvalidArgument("interpolation bound needs an even k >= 2, got " + std::to_string(k));
  if (p < k) throw InvalidArgument("interpolation bound needs p >= k");
  // C(k)^k = (k-1)!! for even k, so C(k)^(k/p) = ((k-1)!!)^(1/p).
  const Interval constant_part =
      Interval::exact(Rational(detail::odd_double_factorial_below(k)), prec).pow(Rational(1) / p);
  const Rational exponent = (p - Rational(k)) / (2 * p);
  return constant_part * Interval::exact(Rational(n), prec).pow(exponent);
}

/// N^(1/2 - 1/p): the exact value of C(N,p,2) (and C(N,p,3)) for even N.
inline Interval sharp_pairwise_value(unsigned long n, const Rational& p, mpfr_prec_t prec = kDefaultPrecision) {
  if (n == 0 || n % 2 != 0) throw InvalidArgument("sharp pairwise value is established for even N only, got " + std::to_string(n));
  if (p < 2) throw InvalidArgument("sharp pairwise value needs p >= 2");
  return Interval::exact(Rational(n), prec).pow((p - 2) / (2 * p));
}

}  // namespace kwise
