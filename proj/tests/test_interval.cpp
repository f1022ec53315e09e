#include <gtest/gtest.h>

#include "kwise/interval.hpp"
#include "oracles.hpp"

using namespace kwise;

namespace {

Rational lo_q(const Interval& v) { return v.lo().to_rational(); }
Rational hi_q(const Interval& v) { return v.hi().to_rational(); }

}  // namespace

TEST(BigFloat, ExactRoundTripAndDirectedConversion) {
  const Rational third = make_rational(1, 3);
  const BigFloat down(third, MPFR_RNDD, 64);
  const BigFloat up(third, MPFR_RNDU, 64);
  EXPECT_LT(down.to_rational(), third);
  EXPECT_GT(up.to_rational(), third);
  const BigFloat half(make_rational(1, 2), MPFR_RNDD, 64);
  EXPECT_EQ(half.to_rational(), make_rational(1, 2));
}

TEST(BigFloat, DecimalRoundingDirection) {
  const BigFloat x(make_rational(2, 3), MPFR_RNDN, 128);
  EXPECT_EQ(x.to_decimal(MPFR_RNDD, 5), "6.66666e-01");
  EXPECT_EQ(x.to_decimal(MPFR_RNDU, 5), "6.66667e-01");
}

TEST(Interval, ExactRationalIsEnclosed) {
  const Rational r = make_rational(-22, 7);
  const Interval v = Interval::exact(r);
  EXPECT_TRUE(v.contains(r));
  EXPECT_FALSE(v.is_point());
  EXPECT_TRUE(Interval::exact(make_rational(3, 8)).is_point());
  EXPECT_LT(v.relative_width(), 1e-35);
}

TEST(Interval, PiEnclosure) {
  const Interval pi = Interval::pi(200);
  // 3.14159265358979323846 < pi < 3.14159265358979323847
  EXPECT_GT(lo_q(pi), parse_rational("3.14159265358979323846"));
  EXPECT_LT(hi_q(pi), parse_rational("3.14159265358979323847"));
}

TEST(Interval, RootsAndPowers) {
  const Interval r = Interval::exact(Rational(3)).nth_root(4);
  EXPECT_LE(pow(lo_q(r), 4), 3);
  EXPECT_GE(pow(hi_q(r), 4), 3);
  EXPECT_LT(r.relative_width(), 1e-35);

  const Interval p = Interval::exact(Rational(8)).pow(make_rational(2, 3));
  EXPECT_TRUE(p.contains(Rational(4)));

  const Interval inv = Interval::exact(Rational(4)).pow(make_rational(-1, 2));
  EXPECT_TRUE(inv.contains(make_rational(1, 2)));

  EXPECT_THROW(Interval::exact(Rational(-1)).sqrt(), InvalidArgument);
  EXPECT_THROW(Interval::exact(Rational(0)).pow(make_rational(-1)), InvalidArgument);
  EXPECT_THROW(Interval::exact(Rational(1)) / Interval::exact(Rational(0)), InvalidArgument);
}

TEST(IntervalProperty, ArithmeticContainsExactResult) {
  oracle::Gen gen(21);
  for (int trial = 0; trial < 500; ++trial) {
    const Rational a = gen.rational(1000, 997);
    Rational b = gen.rational(1000, 991);
    const mpfr_prec_t prec = 24 + static_cast<mpfr_prec_t>(gen.integer(0, 200));
    const Interval ia = Interval::exact(a, prec);
    const Interval ib = Interval::exact(b, prec);
    EXPECT_TRUE((ia + ib).contains(Rational(a + b)));
    EXPECT_TRUE((ia - ib).contains(Rational(a - b)));
    EXPECT_TRUE((ia * ib).contains(Rational(a * b)));
    if (b != 0) {
      EXPECT_TRUE((ia / ib).contains(Rational(a / b)));
    }
  }
}

TEST(IntervalProperty, RootEnclosuresBracketThePower) {
  oracle::Gen gen(22);
  for (int trial = 0; trial < 300; ++trial) {
    Rational x(gen.integer(0, 5000), gen.integer(1, 300));
    x.canonicalize();
    const auto n = static_cast<unsigned long>(gen.integer(1, 9));
    const mpfr_prec_t prec = 32 + static_cast<mpfr_prec_t>(gen.integer(0, 160));
    const Interval r = Interval::exact(x, prec).nth_root(n);
    EXPECT_LE(pow(lo_q(r), n), x);
    EXPECT_GE(pow(hi_q(r), n), x);

    const auto e = static_cast<unsigned long>(gen.integer(0, 7));
    const Interval pw = Interval::exact(x, prec).pow(e);
    EXPECT_TRUE(pw.contains(pow(x, e)));
  }
}

TEST(IntervalProperty, WidthShrinksWithPrecision) {
  const Interval coarse = Interval::exact(Rational(2), 64).sqrt();
  const Interval fine = Interval::exact(Rational(2), 256).sqrt();
  EXPECT_TRUE(coarse.contains(fine));
  EXPECT_LT(fine.relative_width(), coarse.relative_width());
}
