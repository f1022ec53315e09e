#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "kwise/constructions.hpp"
#include "kwise/independence.hpp"
#include "oracles.hpp"

using namespace kwise;

namespace {

std::vector<unsigned> random_subset(oracle::Gen& gen, unsigned n, unsigned size) {
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  std::shuffle(perm.begin(), perm.end(), gen.rng);
  perm.resize(size);
  std::sort(perm.begin(), perm.end());
  return perm;
}

std::vector<SampleSpace> constructed_spaces() {
  std::vector<SampleSpace> out;
  for (unsigned n = 2; n <= 10; n += 2) out.push_back(partition_space(n));
  for (unsigned n = 1; n <= 3; ++n) out.push_back(xor_space(n));
  for (unsigned n = 1; n <= 8; ++n) out.push_back(independent_space(n));
  return out;
}

}  // namespace

TEST(FourierCoefficient, Examples) {
  const std::vector<unsigned> pair{0, 1};
  EXPECT_EQ(fourier_coefficient(partition_space(4), pair), 0);
  EXPECT_EQ(fourier_coefficient(partition_space(4), std::vector<unsigned>{}), 1);
  EXPECT_EQ(fourier_coefficient(xor_space(3), std::vector<unsigned>{0, 3, 5, 6}), 1);
  EXPECT_THROW(fourier_coefficient(partition_space(4), std::vector<unsigned>{4}), IndexOutOfRange);
}

TEST(FourierCoefficient, MatchesAtomOracle) {
  oracle::Gen gen(31);
  for (int trial = 0; trial < 300; ++trial) {
    const auto n = static_cast<unsigned>(gen.integer(1, 10));
    const SampleSpace s = gen.space(n, static_cast<std::size_t>(gen.integer(1, 60)));
    const auto T = random_subset(gen, n, static_cast<unsigned>(gen.integer(0, n)));
    const Rational c = fourier_coefficient(s, T);
    EXPECT_EQ(c, oracle::parity(s, T));
    EXPECT_LE(c, 1);
    EXPECT_GE(c, -1);
  }
}

TEST(CheckKwise, Examples) {
  EXPECT_TRUE(check_kwise(partition_space(8), 3).passed());

  const IndependenceReport four = check_kwise(partition_space(8), 4);
  EXPECT_FALSE(four.passed());
  EXPECT_EQ(four.k_verified, 3U);
  ASSERT_TRUE(four.witness.has_value());
  EXPECT_EQ(four.witness->coords, (std::vector<unsigned>{0, 1, 2, 3}));
  EXPECT_EQ(four.witness->coefficient, oracle::parity(partition_space(8), {0, 1, 2, 3}));
  EXPECT_NE(four.witness->coefficient, 0);

  EXPECT_TRUE(check_kwise(independent_space(5), 5).passed());
  EXPECT_THROW(check_kwise(independent_space(3), 4), InvalidArgument);
  EXPECT_THROW(check_kwise(independent_space(3), 0), InvalidArgument);
}

TEST(CheckKwiseMarginal, Examples) {
  const IndependenceReport r = check_kwise_marginal(partition_space(4), 2);
  EXPECT_TRUE(r.passed());
  for (unsigned i = 0; i < 4; ++i)
    for (unsigned j = i + 1; j < 4; ++j) {
      const std::vector<unsigned> T{i, j};
      EXPECT_EQ(project_marginal(partition_space(4), T), independent_space(2));
    }

  const IndependenceReport point = check_kwise_marginal(SampleSpace::point_mass(SignVector::all_plus(3)), 1);
  EXPECT_FALSE(point.passed());
  EXPECT_EQ(point.k_verified, 0U);
  ASSERT_TRUE(point.witness.has_value());
  EXPECT_EQ(point.witness->coords, std::vector<unsigned>{0});
  EXPECT_EQ(point.witness->coefficient, 1);

  EXPECT_TRUE(check_kwise_marginal(xor_space(2), 2).passed());
}

TEST(CheckExchangeable, Examples) {
  EXPECT_TRUE(check_exchangeable(partition_space(6)));
  EXPECT_FALSE(check_exchangeable(xor_space(3)));
  EXPECT_TRUE(check_exchangeable(independent_space(4)));
  EXPECT_FALSE(check_exchangeable(SampleSpace(2, {{0b01, Rational(1)}})));
}

TEST(XorFamilyCoefficients, PairwiseVanishAndAgreeWithOracle) {
  for (unsigned n = 1; n <= 6; ++n) {
    const XorFamily family(n);
    EXPECT_TRUE(check_xor_pairwise(family));
    for (std::uint64_t i = 0; i < family.coordinates(); ++i)
      for (std::uint64_t j = i + 1; j < family.coordinates(); ++j) {
        const std::uint64_t pair[] = {i, j};
        ASSERT_EQ(xor_fourier_coefficient(family, pair), oracle::xor_parity(n, {i, j}));
      }
  }
  const XorFamily three(3);
  const std::uint64_t quad[] = {0, 3, 5, 6};
  EXPECT_EQ(xor_fourier_coefficient(three, quad), 1);
  const std::uint64_t bad[] = {8};
  EXPECT_THROW(xor_fourier_coefficient(three, bad), IndexOutOfRange);
}

// Property tests.

TEST(IndependenceProperty, ParityAndMarginalFormsAgree) {
  oracle::Gen gen(32);
  std::vector<SampleSpace> spaces = constructed_spaces();
  for (int trial = 0; trial < 150; ++trial) {
    const auto n = static_cast<unsigned>(gen.integer(1, 10));
    spaces.push_back(gen.space(n, static_cast<std::size_t>(gen.integer(1, 50))));
    // Mixtures with the product law are k-wise independent only when the noise is; mixing with
    // weight 1 gives the product law itself, exercising the passing branch on random inputs.
    spaces.push_back(gen.mixed_with_uniform(n, static_cast<std::size_t>(gen.integer(1, 20)),
                                            gen.integer(0, 1) == 1 ? Rational(1) : make_rational(1, 2)));
  }
  // Symmetrized product-like laws with extra structure: the partition law mixed with the product law.
  for (unsigned n = 4; n <= 10; n += 2) {
    std::map<std::uint64_t, Rational> m;
    const SampleSpace part = partition_space(n), ind = independent_space(n);
    for (const Atom& a : part.atoms()) m[a.bits] += a.prob / 2;
    for (const Atom& a : ind.atoms()) m[a.bits] += a.prob / 2;
    spaces.push_back(SampleSpace::from_map(n, m));
  }
  for (const SampleSpace& s : spaces) {
    for (unsigned k = 1; k <= std::min(4U, s.dimension()); ++k) {
      const IndependenceReport parity = check_kwise(s, k);
      const IndependenceReport marginal = check_kwise_marginal(s, k);
      ASSERT_EQ(parity.passed(), marginal.passed());
      ASSERT_EQ(parity.k_verified, marginal.k_verified);
      if (parity.witness) {
        ASSERT_TRUE(marginal.witness.has_value());
        EXPECT_EQ(parity.witness->coords, marginal.witness->coords);
        EXPECT_EQ(parity.witness->coefficient, marginal.witness->coefficient);
        EXPECT_EQ(parity.witness->coords.size(), parity.k_verified + 1);
        EXPECT_NE(parity.witness->coefficient, 0);
      }
    }
  }
}

TEST(IndependenceProperty, ExchangeableCoefficientsDependOnlyOnSize) {
  oracle::Gen gen(33);
  for (int trial = 0; trial < 80; ++trial) {
    const auto n = static_cast<unsigned>(gen.integer(2, 10));
    const SampleSpace s = expand(symmetrize(gen.space(n, static_cast<std::size_t>(gen.integer(1, 40)))));
    ASSERT_TRUE(check_exchangeable(s));
    const auto size = static_cast<unsigned>(gen.integer(1, n));
    std::vector<unsigned> first(size);
    std::iota(first.begin(), first.end(), 0U);
    const Rational reference = fourier_coefficient(s, first);
    for (int rep = 0; rep < 5; ++rep) EXPECT_EQ(fourier_coefficient(s, random_subset(gen, n, size)), reference);
  }
}

TEST(IndependenceProperty, PassingIsMonotoneInK) {
  oracle::Gen gen(34);
  std::vector<SampleSpace> spaces = constructed_spaces();
  for (int trial = 0; trial < 60; ++trial) {
    const auto n = static_cast<unsigned>(gen.integer(1, 8));
    spaces.push_back(gen.mixed_with_uniform(n, 3, make_rational(7, 8)));
  }
  for (const SampleSpace& s : spaces) {
    const unsigned n = s.dimension();
    const unsigned kv = check_kwise(s, n).k_verified;
    for (unsigned k = 1; k <= n; ++k) EXPECT_EQ(check_kwise(s, k).passed(), k <= kv);
  }
}
