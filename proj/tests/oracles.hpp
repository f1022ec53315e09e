#pragma once

// Brute-force reference computations for the tests. These deliberately avoid the library's
// own algorithms: everything is plain enumeration over atoms, vectors or seeds.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "kwise/sample_space.hpp"

namespace oracle {

using Q = mpq_class;

inline int coord(std::uint64_t bits, unsigned i) { return ((bits >> i) & 1U) ? 1 : -1; }

inline Q power(const Q& x, unsigned e) {
  Q out = 1;
  for (unsigned i = 0; i < e; ++i) out *= x;
  return out;
}

inline Q abs_q(const Q& x) { return x < 0 ? Q(-x) : x; }

/// E prod_{i in T} x_i, one atom at a time.
inline Q parity(const kwise::SampleSpace& space, const std::vector<unsigned>& T) {
  Q sum;
  for (const auto& atom : space.atoms()) {
    int prod = 1;
    for (unsigned i : T) prod *= coord(atom.bits, i);
    sum += prod * atom.prob;
  }
  return sum;
}

/// Average of prod_{i < j} x_i over all x in {-1,1}^n with exactly m coordinates equal to +1.
inline Q class_average(unsigned n, unsigned j, unsigned m, std::uint64_t t_mask) {
  long sum = 0, count = 0;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    if (static_cast<unsigned>(__builtin_popcountll(x)) != m) continue;
    int prod = 1;
    for (unsigned i = 0; i < n; ++i)
      if ((t_mask >> i) & 1U) prod *= coord(x, i);
    sum += prod;
    ++count;
  }
  (void)j;
  Q out(sum, count);
  out.canonicalize();
  return out;
}

/// E|<a, x>|^p for integer p, atom by atom.
inline Q moment(const kwise::SampleSpace& space, const std::vector<Q>& a, unsigned p) {
  Q total;
  for (const auto& atom : space.atoms()) {
    Q s;
    for (unsigned i = 0; i < space.dimension(); ++i) s += coord(atom.bits, i) * a[i];
    total += atom.prob * power(abs_q(s), p);
  }
  return total;
}

/// E|<a, x>|^p for the uniform product law on {-1,1}^n, by enumerating all 2^n vectors.
inline Q independent_moment(const std::vector<Q>& a, unsigned p) {
  const auto n = static_cast<unsigned>(a.size());
  Q total;
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
    Q s;
    for (unsigned i = 0; i < n; ++i) s += coord(x, i) * a[i];
    total += power(abs_q(s), p);
  }
  Q out = total / Q(mpz_class(1) << n);
  out.canonicalize();
  return out;
}

/// XOR family evaluated literally: seed signs e0..en, coordinate S = e0 * prod_{i in S} e_i,
/// where S is read as a subset of {1..n} via bit i-1 of the coordinate index.
inline int xor_coordinate(unsigned n, std::uint64_t seed, std::uint64_t S) {
  auto e = [&](unsigned i) { return ((seed >> i) & 1U) ? -1 : 1; };
  int v = e(0);
  for (unsigned i = 1; i <= n; ++i)
    if ((S >> (i - 1)) & 1U) v *= e(i);
  return v;
}

/// Average over all 2^{n+1} seeds of prod_{S in coords} eps_S.
inline Q xor_parity(unsigned n, const std::vector<std::uint64_t>& coords) {
  long sum = 0;
  const std::uint64_t seeds = std::uint64_t{1} << (n + 1);
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    int prod = 1;
    for (std::uint64_t S : coords) prod *= xor_coordinate(n, seed, S);
    sum += prod;
  }
  Q out(sum, static_cast<long>(seeds));
  out.canonicalize();
  return out;
}

/// E|sum_S a_S eps_S|^p of the XOR family by seed enumeration.
inline Q xor_moment(unsigned n, const std::vector<Q>& a, unsigned p) {
  const std::uint64_t seeds = std::uint64_t{1} << (n + 1);
  Q total;
  for (std::uint64_t seed = 0; seed < seeds; ++seed) {
    Q s;
    for (std::uint64_t S = 0; S < a.size(); ++S) s += xor_coordinate(n, seed, S) * a[S];
    total += power(abs_q(s), p);
  }
  Q out = total / Q(static_cast<long>(seeds));
  out.canonicalize();
  return out;
}

/// Pr[sum_i x_i = s] for every s.
inline std::map<int, Q> sum_distribution(const kwise::SampleSpace& space) {
  std::map<int, Q> out;
  for (const auto& atom : space.atoms()) {
    int s = 0;
    for (unsigned i = 0; i < space.dimension(); ++i) s += coord(atom.bits, i);
    out[s] += atom.prob;
  }
  return out;
}

/// Marginal law on coords, as a map from the projected bitmask to its mass.
inline std::map<std::uint64_t, Q> marginal(const kwise::SampleSpace& space, const std::vector<unsigned>& coords) {
  std::map<std::uint64_t, Q> out;
  for (const auto& atom : space.atoms()) {
    std::uint64_t y = 0;
    for (unsigned r = 0; r < coords.size(); ++r)
      if ((atom.bits >> coords[r]) & 1U) y |= std::uint64_t{1} << r;
    out[y] += atom.prob;
  }
  return out;
}

// Hand-rolled generators for property tests (no property-testing library is installed).

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}

  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }

  Q rational(long max_num = 9, long max_den = 7) {
    Q q(integer(-max_num, max_num), integer(1, max_den));
    q.canonicalize();
    return q;
  }

  std::vector<Q> weights(unsigned n) {
    std::vector<Q> a(n);
    bool nonzero = false;
    while (!nonzero) {
      for (Q& v : a) v = rational();
      for (const Q& v : a) nonzero = nonzero || v != 0;
    }
    return a;
  }

  /// Random law on {-1,1}^n with the given support size (<= 2^n), positive integer weights.
  kwise::SampleSpace space(unsigned n, std::size_t support) {
    std::map<std::uint64_t, Q> masses;
    const std::uint64_t cap = std::uint64_t{1} << n;
    if (support > cap) support = cap;
    long total = 0;
    std::map<std::uint64_t, long> w;
    while (w.size() < support) {
      const auto x = static_cast<std::uint64_t>(integer(0, static_cast<long>(cap - 1)));
      if (w.count(x)) continue;
      w[x] = integer(1, 6);
      total += w[x];
    }
    for (const auto& [x, v] : w) {
      Q q(v, total);
      q.canonicalize();
      masses[x] = q;
    }
    return kwise::SampleSpace::from_map(n, masses);
  }

  /// Random mixture of an exactly k-wise independent law with extra structure: the uniform law on
  /// a random coset-free linear code would be ideal, but a mixture of the product measure and a
  /// random space keeps the test generic; weight 1 on the product measure gives a k-wise space.
  kwise::SampleSpace mixed_with_uniform(unsigned n, std::size_t support, const Q& uniform_weight) {
    const kwise::SampleSpace noise = space(n, support);
    std::map<std::uint64_t, Q> masses;
    Q u = uniform_weight / Q(mpz_class(1) << n);
    u.canonicalize();
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) masses[x] = u;
    for (const auto& atom : noise.atoms()) masses[atom.bits] += (1 - uniform_weight) * atom.prob;
    return kwise::SampleSpace::from_map(n, masses);
  }
};

}  // namespace oracle
