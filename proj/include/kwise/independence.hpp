#pragma once

#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kwise/constructions.hpp"
#include "kwise/errors.hpp"
#include "kwise/rational.hpp"
#include "kwise/sample_space.hpp"

namespace kwise {

/// Visits the k-subsets of {0..n-1} in lexicographic order until fn returns false.
/// Returns false iff the visit was stopped early.
template <class Fn>
bool for_each_combination(unsigned n, unsigned k, Fn&& fn) {
  if (k > n) return true;
  std::vector<unsigned> idx(k);
  std::iota(idx.begin(), idx.end(), 0U);
  while (true) {
    if (!fn(std::span<const unsigned>(idx))) return false;
    int i = static_cast<int>(k) - 1;
    while (i >= 0 && idx[i] == n - k + static_cast<unsigned>(i)) --i;
    if (i < 0) return true;
    ++idx[i];
    for (unsigned j = static_cast<unsigned>(i) + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

struct IndependenceWitness {
  std::vector<unsigned> coords;
  Rational coefficient;
};

struct IndependenceReport {
  unsigned requested_k = 0;
  /// Largest j <= requested_k with every parity of order <= j vanishing.
  unsigned k_verified = 0;
  /// Smallest violating index set (by size, then lexicographically), of size k_verified + 1.
  std::optional<IndependenceWitness> witness;

  bool passed() const { return k_verified >= requested_k; }
};

namespace detail {

inline std::uint64_t coordinate_mask(unsigned n, std::span<const unsigned> coords) {
  std::uint64_t mask = 0;
  for (unsigned c : coords) {
    if (c >= n) throw IndexOutOfRange("coordinate " + std::to_string(c) + " out of range for dimension " + std::to_string(n));
    mask |= std::uint64_t{1} << c;
  }
  return mask;
}

inline void check_order(const SampleSpace& space, unsigned k) {
  if (k == 0 || k > space.dimension())
    throw InvalidArgument("independence order must lie in [1, n], got " + std::to_string(k));
}

}  // namespace detail

/// E[prod_{i in T} eps_i], exactly.
inline Rational fourier_coefficient(const SampleSpace& space, std::span<const unsigned> coords) {
  const std::uint64_t mask = detail::coordinate_mask(space.dimension(), coords);
  Rational sum;
  for (const Atom& atom : space.atoms()) {
    if ((std::popcount(~atom.bits & mask) & 1) != 0)
      sum -= atom.prob;
    else
      sum += atom.prob;
  }
  return sum;
}

/// Parity form: k-wise independent iff every nonempty parity of order <= k vanishes.
inline IndependenceReport check_kwise(const SampleSpace& space, unsigned k) {
  detail::check_order(space, k);
  IndependenceReport report{k, 0, std::nullopt};
  for (unsigned j = 1; j <= k; ++j) {
    const bool clean = for_each_combination(space.dimension(), j, [&](std::span<const unsigned> coords) {
      Rational c = fourier_coefficient(space, coords);
      if (c == 0) return true;
      report.witness = IndependenceWitness{{coords.begin(), coords.end()}, std::move(c)};
      return false;
    });
    if (!clean) return report;
    report.k_verified = j;
  }
  return report;
}

/// Marginal form: every projection onto j <= k coordinates must be uniform on {-1,1}^j.
inline IndependenceReport check_kwise_marginal(const SampleSpace& space, unsigned k) {
  detail::check_order(space, k);
  IndependenceReport report{k, 0, std::nullopt};
  for (unsigned j = 1; j <= k; ++j) {
    Rational uniform(1);
    mpz_mul_2exp(uniform.get_den_mpz_t(), uniform.get_den_mpz_t(), j);
    const bool clean = for_each_combination(space.dimension(), j, [&](std::span<const unsigned> coords) {
      const SampleSpace marginal = project_marginal(space, coords);
      bool is_uniform = marginal.support_size() == (std::size_t{1} << j);
      for (const Atom& atom : marginal.atoms()) is_uniform = is_uniform && atom.prob == uniform;
      if (is_uniform) return true;
      // Lower-order marginals are uniform here, so the top parity of this marginal is the
      // only nonzero Fourier coefficient.
      Rational c;
      for (const Atom& atom : marginal.atoms()) {
        const bool odd_minus = ((j - static_cast<unsigned>(std::popcount(atom.bits))) & 1U) != 0;
        c += odd_minus ? Rational(-atom.prob) : atom.prob;
      }
      report.witness = IndependenceWitness{{coords.begin(), coords.end()}, std::move(c)};
      return false;
    });
    if (!clean) return report;
    report.k_verified = j;
  }
  return report;
}

/// Invariance under every adjacent transposition of coordinates (these generate S_n).
inline bool check_exchangeable(const SampleSpace& space) {
  const unsigned n = space.dimension();
  for (unsigned i = 0; i + 1 < n; ++i) {
    for (const Atom& atom : space.atoms()) {
      const std::uint64_t a = (atom.bits >> i) & 1U;
      const std::uint64_t b = (atom.bits >> (i + 1)) & 1U;
      if (a == b) continue;
      const std::uint64_t swapped = atom.bits ^ (std::uint64_t{3} << i);
      if (space.probability(swapped) != atom.prob) return false;
    }
  }
  return true;
}

/// Parity E[prod_{j in T} eps_j] of the XOR family, averaged over all 2^{n+1} seeds.
inline Rational xor_fourier_coefficient(const XorFamily& family, std::span<const std::uint64_t> coords) {
  for (std::uint64_t c : coords)
    if (c >= family.coordinates()) throw IndexOutOfRange("xor coordinate out of range");
  long long sum = 0;
  for (std::uint64_t seed = 0; seed < family.seed_count(); ++seed) {
    int prod = 1;
    for (std::uint64_t c : coords) prod *= XorFamily::sign(seed, c);
    sum += prod;
  }
  Rational out(BigInt(static_cast<long>(sum)), BigInt(family.seed_count()));
  out.canonicalize();
  return out;
}

/// True iff every pair (and single) parity of the XOR family vanishes over the seed space.
inline bool check_xor_pairwise(const XorFamily& family) {
  const std::uint64_t dim = family.coordinates();
  for (std::uint64_t i = 0; i < dim; ++i) {
    const std::uint64_t single[] = {i};
    if (xor_fourier_coefficient(family, single) != 0) return false;
    for (std::uint64_t j = i + 1; j < dim; ++j) {
      const std::uint64_t pair[] = {i, j};
      if (xor_fourier_coefficient(family, pair) != 0) return false;
    }
  }
  return true;
}

}  // namespace kwise
