#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "kwise/rational.hpp"

namespace kwise::detail {

/// Arithmetic modulo the Mersenne prime 2^61 - 1.
struct Mod61 {
  static constexpr std::uint64_t kPrime = (std::uint64_t{1} << 61) - 1;

  static std::uint64_t reduce(unsigned __int128 z) {
    std::uint64_t s = static_cast<std::uint64_t>(z & kPrime) + static_cast<std::uint64_t>(z >> 61);
    s = (s & kPrime) + (s >> 61);
    return s >= kPrime ? s - kPrime : s;
  }
  static std::uint64_t mul(std::uint64_t a, std::uint64_t b) { return reduce(static_cast<unsigned __int128>(a) * b); }
  static std::uint64_t add(std::uint64_t a, std::uint64_t b) { return a + b >= kPrime ? a + b - kPrime : a + b; }
  static std::uint64_t sub(std::uint64_t a, std::uint64_t b) { return a >= b ? a - b : a + kPrime - b; }
  static std::uint64_t inv(std::uint64_t a) {
    std::uint64_t result = 1, base = a, e = kPrime - 2;
    while (e != 0) {
      if (e & 1) result = mul(result, base);
      base = mul(base, base);
      e >>= 1;
    }
    return result;
  }
  static std::uint64_t from(const mpz_class& z) { return mpz_fdiv_ui(z.get_mpz_t(), kPrime); }
};

/// Dixon's p-adic solver for square integer systems: one LU factorization modulo a word-size
/// prime, Hensel lifting of the solution, then rational reconstruction. Every reconstructed
/// answer is checked exactly against the system before it is returned.
class DixonSolver {
 public:
  /// a[i][j] is the integer matrix; returns nothing if it is singular modulo the prime.
  static std::optional<DixonSolver> create(std::vector<std::vector<mpz_class>> a) {
    DixonSolver s;
    s.m_ = a.size();
    const std::size_t m = s.m_;
    s.lu_.assign(m * m, 0);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) s.lu_[i * m + j] = Mod61::from(a[i][j]);
    s.perm_.resize(m);
    for (std::size_t i = 0; i < m; ++i) s.perm_[i] = i;
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t pivot = k;
      while (pivot < m && s.lu_[pivot * m + k] == 0) ++pivot;
      if (pivot == m) return std::nullopt;
      if (pivot != k) {
        for (std::size_t j = 0; j < m; ++j) std::swap(s.lu_[k * m + j], s.lu_[pivot * m + j]);
        std::swap(s.perm_[k], s.perm_[pivot]);
      }
      const std::uint64_t inv = Mod61::inv(s.lu_[k * m + k]);
      s.pivot_inv_.push_back(inv);
      const std::uint64_t* prow = &s.lu_[k * m];
      for (std::size_t i = k + 1; i < m; ++i) {
        std::uint64_t* row = &s.lu_[i * m];
        if (row[k] == 0) continue;
        const std::uint64_t l = Mod61::mul(row[k], inv);
        row[k] = l;
        for (std::size_t j = k + 1; j < m; ++j)
          if (prow[j] != 0) row[j] = Mod61::sub(row[j], Mod61::mul(l, prow[j]));
      }
    }
    s.a_ = std::move(a);
    return s;
  }

  /// Solves A x = b (or A^T x = b) over the rationals for an integer right-hand side.
  std::optional<std::vector<Rational>> solve(const std::vector<mpz_class>& b, bool transposed,
                                             std::size_t max_digits = 4096) const {
    const std::size_t m = m_;
    std::vector<mpz_class> residual = b;
    std::vector<mpz_class> acc(m);
    mpz_class modulus = 1;
    std::vector<std::uint64_t> digit(m);
    std::size_t next_attempt = 4;
    for (std::size_t iter = 1; iter <= max_digits; ++iter) {
      for (std::size_t i = 0; i < m; ++i) digit[i] = Mod61::from(residual[i]);
      transposed ? solve_mod_transposed(digit) : solve_mod(digit);
      // residual <- (residual - A digit) / p, an exact division.
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
          const mpz_class& aij = transposed ? a_[j][i] : a_[i][j];
          if (digit[j] != 0 && sgn(aij) != 0) mpz_submul_ui(residual[i].get_mpz_t(), aij.get_mpz_t(), digit[j]);
        }
        mpz_divexact_ui(residual[i].get_mpz_t(), residual[i].get_mpz_t(), Mod61::kPrime);
      }
      for (std::size_t j = 0; j < m; ++j) mpz_addmul_ui(acc[j].get_mpz_t(), modulus.get_mpz_t(), digit[j]);
      mpz_mul_ui(modulus.get_mpz_t(), modulus.get_mpz_t(), Mod61::kPrime);

      bool settled = true;
      for (const mpz_class& r : residual)
        if (sgn(r) != 0) settled = false;
      if (settled) return std::vector<Rational>(acc.begin(), acc.end());  // exact integer solution
      if (iter == next_attempt) {
        next_attempt *= 2;
        if (auto x = reconstruct(acc, modulus); x && check(*x, b, transposed)) return x;
      }
    }
    return std::nullopt;
  }

 private:
  void solve_mod(std::vector<std::uint64_t>& v) const {
    const std::size_t m = m_;
    std::vector<std::uint64_t> z(m);
    for (std::size_t i = 0; i < m; ++i) z[i] = v[perm_[i]];
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint64_t* row = &lu_[i * m];
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < i; ++k)
        if (row[k] != 0) acc = Mod61::add(acc, Mod61::mul(row[k], z[k]));
      z[i] = Mod61::sub(z[i], acc);
    }
    for (std::size_t i = m; i-- > 0;) {
      const std::uint64_t* row = &lu_[i * m];
      std::uint64_t acc = 0;
      for (std::size_t j = i + 1; j < m; ++j)
        if (row[j] != 0) acc = Mod61::add(acc, Mod61::mul(row[j], z[j]));
      z[i] = Mod61::mul(Mod61::sub(z[i], acc), pivot_inv_[i]);
    }
    v = std::move(z);
  }

  void solve_mod_transposed(std::vector<std::uint64_t>& v) const {
    // A = P^T L U, so A^T = U^T L^T P and U^T L^T (P x) = v.
    const std::size_t m = m_;
    std::vector<std::uint64_t> w = v;
    for (std::size_t j = 0; j < m; ++j) {
      std::uint64_t acc = 0;
      for (std::size_t i = 0; i < j; ++i)
        if (lu_[i * m + j] != 0) acc = Mod61::add(acc, Mod61::mul(lu_[i * m + j], w[i]));
      w[j] = Mod61::mul(Mod61::sub(w[j], acc), pivot_inv_[j]);
    }
    for (std::size_t j = m; j-- > 0;) {
      std::uint64_t acc = 0;
      for (std::size_t i = j + 1; i < m; ++i)
        if (lu_[i * m + j] != 0) acc = Mod61::add(acc, Mod61::mul(lu_[i * m + j], w[i]));
      w[j] = Mod61::sub(w[j], acc);
    }
    for (std::size_t k = 0; k < m; ++k) v[perm_[k]] = w[k];
  }

  /// Rational reconstruction of each residue, carrying a running common denominator so that
  /// later coordinates usually reconstruct in a step or two.
  static std::optional<std::vector<Rational>> reconstruct(const std::vector<mpz_class>& residues, const mpz_class& modulus) {
    mpz_class bound;
    mpz_class half = modulus / 2;
    mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
    mpz_class common = 1;
    std::vector<Rational> out;
    out.reserve(residues.size());
    for (const mpz_class& u : residues) {
      mpz_class r0 = modulus, r1 = (u * common) % modulus, t0 = 0, t1 = 1, q, tmp;
      while (r1 > bound) {
        mpz_fdiv_q(q.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
        tmp = r0 - q * r1;
        r0 = std::move(r1);
        r1 = std::move(tmp);
        tmp = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(tmp);
      }
      if (abs(t1) > bound || sgn(t1) == 0) return std::nullopt;
      Rational value(r1, t1 * common);
      value.canonicalize();
      common *= abs(t1);
      out.push_back(std::move(value));
    }
    return out;
  }

  bool check(const std::vector<Rational>& x, const std::vector<mpz_class>& b, bool transposed) const {
    for (std::size_t i = 0; i < m_; ++i) {
      Rational lhs;
      for (std::size_t j = 0; j < m_; ++j) {
        const mpz_class& aij = transposed ? a_[j][i] : a_[i][j];
        if (sgn(aij) != 0 && sgn(x[j]) != 0) lhs += Rational(aij) * x[j];
      }
      if (lhs != Rational(b[i])) return false;
    }
    return true;
  }

  std::size_t m_ = 0;
  std::vector<std::vector<mpz_class>> a_;
  std::vector<std::uint64_t> lu_;
  std::vector<std::size_t> perm_;
  std::vector<std::uint64_t> pivot_inv_;
};

}  // namespace kwise::detail
