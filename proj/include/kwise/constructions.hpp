#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "kwise/errors.hpp"
#include "kwise/rational.hpp"
#include "kwise/sample_space.hpp"

namespace kwise {

/// Largest n for which xor_space materializes the 2^n-coordinate law.
inline constexpr unsigned kMaxXorEnumeration = 4;

/// Mixture of the two unanimous vectors (total mass 1/N) with the uniform law on balanced
/// vectors (total mass (N-1)/N). Pairwise and 3-wise independent, exchangeable.
inline SampleSpace partition_space(unsigned n) {
  if (n % 2 != 0 || n == 0) throw InvalidArgument("partition construction needs a positive even N, got " + std::to_string(n));
  if (n > kMaxEnumerationDimension) throw DimensionTooLarge("partition construction capped at N = 24");
  std::vector<Rational> q(n + 1);
  q[0] = Rational(1, 2 * n);
  q[n] = Rational(1, 2 * n);
  q[n / 2] += Rational(n - 1, n);
  for (auto& v : q) v.canonicalize();
  return expand(WeightProfile(n, std::move(q)));
}

/// Seed-space view of the XOR family: seeds are n+1 independent signs (e0, e1..en), and
/// coordinate j in [0, 2^n) is e0 * prod_{i : bit i-1 of j set} e_i.
class XorFamily {
 public:
  explicit XorFamily(unsigned n) : n_(n) {
    if (n == 0 || n > 62) throw DimensionTooLarge("xor family order must lie in [1, 62], got " + std::to_string(n));
  }

  unsigned order() const { return n_; }
  std::uint64_t coordinates() const { return std::uint64_t{1} << n_; }
  std::uint64_t seed_count() const { return std::uint64_t{1} << (n_ + 1); }

  /// Seed bit 0 set means e0 = -1; seed bit i (1..n) set means e_i = -1.
  static int sign(std::uint64_t seed, std::uint64_t coordinate) {
    const std::uint64_t flips = (seed & 1U) + std::popcount((seed >> 1) & coordinate);
    return (flips & 1U) != 0 ? -1 : 1;
  }

 private:
  unsigned n_;
};

/// Law of the 2^n pairwise independent XOR signs, coordinate j <-> subset bitmask j.
inline SampleSpace xor_space(unsigned n) {
  if (n == 0) throw InvalidArgument("xor construction needs n >= 1");
  if (n > kMaxXorEnumeration)
    throw DimensionTooLarge("xor_space materializes only n <= 4; use the sampler for larger n");
  const XorFamily family(n);
  const auto dim = static_cast<unsigned>(family.coordinates());
  std::vector<Atom> atoms;
  const Rational prob(1, family.seed_count());
  for (std::uint64_t seed = 0; seed < family.seed_count(); ++seed) {
    std::uint64_t bits = 0;
    for (std::uint64_t j = 0; j < family.coordinates(); ++j)
      if (XorFamily::sign(seed, j) > 0) bits |= std::uint64_t{1} << j;
    atoms.push_back({bits, prob});
  }
  return {dim, std::move(atoms)};
}

/// Uniform product measure on {-1,1}^N.
inline SampleSpace independent_space(unsigned n) {
  if (n == 0) throw InvalidArgument("independent construction needs N >= 1");
  if (n > kMaxEnumerationDimension) throw DimensionTooLarge("independent construction capped at N = 24");
  std::vector<Atom> atoms;
  atoms.reserve(std::size_t{1} << n);
  Rational prob(1);
  mpz_mul_2exp(prob.get_den_mpz_t(), prob.get_den_mpz_t(), n);
  for (std::uint64_t bits = 0; bits <= low_mask(n); ++bits) atoms.push_back({bits, prob});
  return {n, std::move(atoms)};
}

}  // namespace kwise
