#pragma once

#include <cstddef>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "kwise/detail/fast_rational.hpp"
#include "kwise/rational.hpp"

namespace kwise::detail {

/// Exact LU factorization P B Q = L U of a square rational matrix with full pivoting on the
/// cheapest nonzero entry, which keeps +-1 data integral for as long as possible.
class ExactLu {
 public:
  /// columns[c][i] = B(i, c). Returns nothing if B is singular.
  static std::optional<ExactLu> factor(std::vector<std::vector<FastRational>> columns) {
    const std::size_t m = columns.size();
    ExactLu lu;
    lu.m_ = m;
    lu.a_.assign(m, std::vector<FastRational>(m));
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t i = 0; i < m; ++i) lu.a_[i][c] = std::move(columns[c][i]);
    lu.row_.resize(m);
    lu.col_.resize(m);
    std::iota(lu.row_.begin(), lu.row_.end(), 0);
    std::iota(lu.col_.begin(), lu.col_.end(), 0);

    auto& a = lu.a_;
    for (std::size_t k = 0; k < m; ++k) {
      std::size_t pi = m, pj = m, best = std::numeric_limits<std::size_t>::max();
      for (std::size_t i = k; i < m && best > 2; ++i)
        for (std::size_t j = k; j < m; ++j) {
          if (a[i][j].is_zero()) continue;
          const std::size_t size = a[i][j].bit_size();
          if (size < best) {
            best = size;
            pi = i;
            pj = j;
            if (size <= 2) break;
          }
        }
      if (pi == m) return std::nullopt;
      std::swap(a[k], a[pi]);
      std::swap(lu.row_[k], lu.row_[pi]);
      if (pj != k) {
        for (auto& row : a) std::swap(row[k], row[pj]);
        std::swap(lu.col_[k], lu.col_[pj]);
      }
      const FastRational inv = a[k][k].reciprocal();
      std::vector<std::size_t> nz;
      for (std::size_t j = k + 1; j < m; ++j)
        if (!a[k][j].is_zero()) nz.push_back(j);
      for (std::size_t i = k + 1; i < m; ++i) {
        if (a[i][k].is_zero()) continue;
        a[i][k] = FastRational::mul(a[i][k], inv);
        const FastRational& l = a[i][k];
        for (std::size_t j : nz) a[i][j].sub_mul(l, a[k][j]);
      }
    }
    return lu;
  }

  /// Solves B x = b.
  std::vector<Rational> solve(const std::vector<Rational>& b) const {
    std::vector<FastRational> z(m_);
    for (std::size_t i = 0; i < m_; ++i) z[i].assign(b[row_[i]]);
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t k = 0; k < i; ++k)
        if (!a_[i][k].is_zero() && !z[k].is_zero()) z[i].sub_mul(a_[i][k], z[k]);
    for (std::size_t i = m_; i-- > 0;) {
      for (std::size_t j = i + 1; j < m_; ++j)
        if (!a_[i][j].is_zero() && !z[j].is_zero()) z[i].sub_mul(a_[i][j], z[j]);
      z[i] = FastRational::div(z[i], a_[i][i]);
    }
    std::vector<Rational> x(m_);
    for (std::size_t k = 0; k < m_; ++k) x[col_[k]] = z[k].to_rational();
    return x;
  }

  /// Solves B^T y = c.
  std::vector<Rational> solve_transposed(const std::vector<Rational>& c) const {
    // B^T = Q U^T L^T P, so U^T L^T (P y) = Q^T c.
    std::vector<FastRational> w(m_);
    for (std::size_t k = 0; k < m_; ++k) w[k].assign(c[col_[k]]);
    for (std::size_t j = 0; j < m_; ++j) {
      for (std::size_t i = 0; i < j; ++i)
        if (!a_[i][j].is_zero() && !w[i].is_zero()) w[j].sub_mul(a_[i][j], w[i]);
      w[j] = FastRational::div(w[j], a_[j][j]);
    }
    for (std::size_t j = m_; j-- > 0;)
      for (std::size_t i = j + 1; i < m_; ++i)
        if (!a_[i][j].is_zero() && !w[i].is_zero()) w[j].sub_mul(a_[i][j], w[i]);
    std::vector<Rational> y(m_);
    for (std::size_t k = 0; k < m_; ++k) y[row_[k]] = w[k].to_rational();
    return y;
  }

 private:
  std::size_t m_ = 0;
  std::vector<std::vector<FastRational>> a_;
  std::vector<std::size_t> row_;
  std::vector<std::size_t> col_;
};

}  // namespace kwise::detail
