#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kwise/detail/basis_solve.hpp"
#include "kwise/detail/dixon.hpp"
#include "kwise/detail/fast_rational.hpp"
#include "kwise/detail/float_simplex.hpp"
#include "kwise/errors.hpp"
#include "kwise/rational.hpp"

namespace kwise {

/// maximize objective . x  subject to  rows . x == rhs,  x >= 0.
struct LinearProgram {
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> rhs;
  std::vector<Rational> objective;

  std::size_t num_rows() const { return rows.size(); }
  std::size_t num_vars() const { return objective.size(); }
};

enum class LpStatus { optimal, infeasible, unbounded };

struct SimplexResult {
  LpStatus status = LpStatus::infeasible;
  Rational value;
  std::vector<Rational> x;
  /// Dual multipliers y, one per row: objective_j <= y . column_j with equality on the basis.
  std::vector<Rational> dual;
  /// Basic variable of each tableau row; empty for rows found to be linearly redundant.
  std::vector<std::optional<std::size_t>> basis;
  std::size_t pivots = 0;
};

namespace detail {

/// Dense tableau simplex over exact rationals. Columns: [structural | artificial | rhs].
/// Artificial columns never re-enter but are kept up to date, so at termination they hold the
/// inverse of the basis (up to the row signs applied to make the rhs nonnegative).
class Tableau {
 public:
  explicit Tableau(const LinearProgram& lp)
      : m_(lp.num_rows()), n_(lp.num_vars()), width_(n_ + m_ + 1), rhs_col_(n_ + m_), cells_(m_), sign_(m_, 1),
        basis_(m_), cost_(width_), redundant_(m_, false) {
    if (lp.rhs.size() != m_) throw DimensionMismatch("rhs length differs from the row count");
    for (std::size_t i = 0; i < m_; ++i) {
      if (lp.rows[i].size() != n_) throw DimensionMismatch("constraint row length differs from the variable count");
      if (lp.rhs[i] < 0) sign_[i] = -1;
      auto& row = cells_[i];
      row.resize(width_);
      for (std::size_t j = 0; j < n_; ++j) {
        row[j].assign(lp.rows[i][j]);
        if (sign_[i] < 0) row[j].negate();
      }
      row[n_ + i] = FastRational(1);
      row[rhs_col_].assign(lp.rhs[i]);
      if (sign_[i] < 0) row[rhs_col_].negate();
      basis_[i] = n_ + i;
    }
  }

  /// Two-phase method: phase 1 maximizes minus the sum of the artificials.
  SimplexResult solve_two_phase(const LinearProgram& lp) {
    SimplexResult out;
    for (auto& c : cost_) c = FastRational();
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) cost_[j].add_mul(FastRational(1), cells_[i][j]);
      cost_[rhs_col_].add_mul(FastRational(1), cells_[i][rhs_col_]);
    }
    if (!run(out.pivots)) throw InternalError("phase 1 reported unbounded");
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] >= n_ && !cells_[i][rhs_col_].is_zero()) {
        out.status = LpStatus::infeasible;
        return out;
      }
    }
    // Zero-level artificials are pivoted out; rows where that is impossible are redundant.
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_) pivot_in_any_structural(i, out.pivots);
    return phase_two(lp, out);
  }

  /// Starts from a known feasible point instead of phase 1: a structural basis is built by
  /// Gauss-Jordan elimination, then each remaining positive nonbasic coordinate is driven to zero
  /// (or into the basis) along its edge direction, moving uphill when its reduced cost is
  /// positive. The result is a basic feasible solution with objective no worse than the start.
  SimplexResult solve_from_point(const LinearProgram& lp, std::span<const Rational> start) {
    SimplexResult out;
    for (std::size_t i = 0; i < m_; ++i) pivot_in_any_structural(i, out.pivots);
    set_phase_two_costs(lp);

    std::vector<FastRational> value(n_ + m_);
    for (std::size_t j = 0; j < n_; ++j) value[j].assign(start[j]);
    std::vector<bool> is_basic(n_ + m_, false);
    for (std::size_t r = 0; r < m_; ++r) is_basic[basis_[r]] = true;

    for (std::size_t j = 0; j < n_; ++j) {
      if (is_basic[j] || value[j].sign() <= 0) continue;
      const bool uphill = cost_[j].sign() > 0;
      // Largest admissible move of x_j (up or down) before some basic variable reaches zero.
      std::optional<std::size_t> leave;
      FastRational best;
      for (std::size_t r = 0; r < m_; ++r) {
        const FastRational& a = cells_[r][j];
        const int s = a.sign();
        if (s == 0 || (uphill ? s < 0 : s > 0)) continue;
        FastRational limit = FastRational::div(value[basis_[r]], a);
        if (!uphill) limit.negate();
        const int c = leave ? compare(limit, best) : -1;
        if (c < 0 || (c == 0 && basis_[r] < basis_[*leave])) {
          leave = r;
          best = std::move(limit);
        }
      }
      if (uphill && !leave) {
        out.status = LpStatus::unbounded;
        return out;
      }
      // Signed change of x_j; basic variables move by -delta * column.
      FastRational delta;
      if (!uphill && (!leave || compare(value[j], best) <= 0)) {
        delta = value[j];
        delta.negate();
        leave.reset();
      } else {
        delta = best;
        if (!uphill) delta.negate();
      }
      value[j].add_mul(FastRational(1), delta);
      for (std::size_t r = 0; r < m_; ++r)
        if (!cells_[r][j].is_zero()) value[basis_[r]].sub_mul(delta, cells_[r][j]);
      if (leave) {
        is_basic[basis_[*leave]] = false;
        value[basis_[*leave]] = FastRational();
        is_basic[j] = true;
        pivot(*leave, j);
        ++out.pivots;
      }
    }

    for (std::size_t r = 0; r < m_; ++r)
      if (!(cells_[r][rhs_col_] == value[basis_[r]]) || cells_[r][rhs_col_].sign() < 0)
        throw InternalError("crossover ended away from the basic solution");
    return phase_two(lp, out);
  }

 private:
  void pivot_in_any_structural(std::size_t row, std::size_t& pivots) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (!cells_[row][j].is_zero() && !is_structural_basic(j)) {
        pivot(row, j);
        ++pivots;
        return;
      }
    }
    redundant_[row] = true;
  }

  bool is_structural_basic(std::size_t j) const {
    for (std::size_t b : basis_)
      if (b == j) return true;
    return false;
  }

  /// d_j = c_j - sum_r c_B(r) T[r][j]; the rhs slot holds minus the objective value.
  void set_phase_two_costs(const LinearProgram& lp) {
    for (std::size_t j = 0; j < width_; ++j) {
      if (j < n_)
        cost_[j].assign(lp.objective[j]);
      else
        cost_[j] = FastRational();
    }
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_) continue;
      const FastRational cb(lp.objective[basis_[r]]);
      if (cb.is_zero()) continue;
      for (std::size_t j = 0; j < width_; ++j)
        if (!cells_[r][j].is_zero()) cost_[j].sub_mul(cb, cells_[r][j]);
    }
  }

  SimplexResult phase_two(const LinearProgram& lp, SimplexResult& out) {
    set_phase_two_costs(lp);
    if (!run(out.pivots)) {
      out.status = LpStatus::unbounded;
      return out;
    }
    out.status = LpStatus::optimal;
    out.x.assign(n_, Rational(0));
    out.basis.resize(m_);
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] < n_) {
        out.x[basis_[r]] = cells_[r][rhs_col_].to_rational();
        out.basis[r] = basis_[r];
      } else if (!redundant_[r]) {
        throw InternalError("artificial variable left in a non-redundant row");
      }
    }
    out.dual.assign(m_, Rational(0));
    for (std::size_t i = 0; i < m_; ++i) {
      FastRational y;
      for (std::size_t r = 0; r < m_; ++r) {
        if (basis_[r] >= n_ || cells_[r][n_ + i].is_zero()) continue;
        y.add_mul(FastRational(lp.objective[basis_[r]]), cells_[r][n_ + i]);
      }
      if (sign_[i] < 0) y.negate();
      out.dual[i] = y.to_rational();
    }
    for (std::size_t j = 0; j < n_; ++j)
      if (out.x[j] != 0) out.value += lp.objective[j] * out.x[j];
    return out;
  }

  /// Pricing loop over the structural columns. Dantzig's rule (largest reduced cost) drives
  /// progress; after kStallLimit consecutive degenerate pivots Bland's rule takes over until the
  /// objective strictly improves, so no basis repeats. Returns false on unboundedness.
  bool run(std::size_t& pivots) {
    constexpr std::size_t kStallLimit = 50;
    std::size_t stalled = 0;
    while (true) {
      const bool bland = stalled >= kStallLimit;
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (cost_[j].sign() <= 0) continue;
        if (enter == n_ || (!bland && compare(cost_[j], cost_[enter]) > 0)) enter = j;
        if (bland) break;
      }
      if (enter == n_) return true;

      std::optional<std::size_t> leave;
      FastRational best;
      for (std::size_t r = 0; r < m_; ++r) {
        const FastRational& a = cells_[r][enter];
        if (a.sign() <= 0) continue;
        FastRational ratio = FastRational::div(cells_[r][rhs_col_], a);
        const int c = leave ? compare(ratio, best) : -1;
        if (c < 0 || (c == 0 && basis_[r] < basis_[*leave])) {
          leave = r;
          best = std::move(ratio);
        }
      }
      if (!leave) return false;
      stalled = best.is_zero() ? stalled + 1 : 0;
      pivot(*leave, enter);
      ++pivots;
    }
  }

  void pivot(std::size_t pr, std::size_t pc) {
    auto& prow = cells_[pr];
    const FastRational inv = prow[pc].reciprocal();
    nonzero_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (prow[j].is_zero()) continue;
      prow[j] = FastRational::mul(prow[j], inv);
      nonzero_.push_back(j);
    }
    FastRational f;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == pr || cells_[r][pc].is_zero()) continue;
      f = cells_[r][pc];
      for (std::size_t j : nonzero_) cells_[r][j].sub_mul(f, prow[j]);
    }
    if (!cost_[pc].is_zero()) {
      f = cost_[pc];
      for (std::size_t j : nonzero_) cost_[j].sub_mul(f, prow[j]);
    }
    basis_[pr] = pc;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::size_t rhs_col_;
  std::vector<std::vector<FastRational>> cells_;
  std::vector<int> sign_;
  std::vector<std::size_t> basis_;
  std::vector<FastRational> cost_;
  std::vector<bool> redundant_;
  std::vector<std::size_t> nonzero_;
};

/// Solves B x_B = b and B^T y = c_B exactly, where B holds the basis columns (variables >= n are
/// unit artificial columns). Dixon lifting is tried first; a rational LU is the fallback.
inline std::optional<std::pair<std::vector<Rational>, std::vector<Rational>>> solve_basis_systems(
    const LinearProgram& lp, const std::vector<std::size_t>& basis) {
  const std::size_t m = lp.num_rows();
  const std::size_t n = lp.num_vars();
  auto entry = [&](std::size_t i, std::size_t r) -> Rational {
    const std::size_t v = basis[r];
    if (v < n) return lp.rows[i][v];
    return Rational(v - n == i ? 1 : 0);
  };
  std::vector<Rational> cb(m);
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) cb[r] = lp.objective[basis[r]];

  // Row scaling S makes S B and S b integral; then B^T y = c_B becomes (S B)^T (S^-1 y) = c_B.
  std::vector<std::vector<mpz_class>> scaled(m, std::vector<mpz_class>(m));
  std::vector<mpz_class> row_scale(m), rhs(m);
  for (std::size_t i = 0; i < m; ++i) {
    mpz_class l = lp.rhs[i].get_den();
    for (std::size_t r = 0; r < m; ++r) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), entry(i, r).get_den_mpz_t());
    row_scale[i] = l;
    for (std::size_t r = 0; r < m; ++r) {
      const Rational e = entry(i, r);
      scaled[i][r] = e.get_num() * (l / e.get_den());
    }
    rhs[i] = lp.rhs[i].get_num() * (l / lp.rhs[i].get_den());
  }
  mpz_class cost_den = 1;
  for (const Rational& c : cb) mpz_lcm(cost_den.get_mpz_t(), cost_den.get_mpz_t(), c.get_den_mpz_t());
  std::vector<mpz_class> cost(m);
  for (std::size_t r = 0; r < m; ++r) cost[r] = cb[r].get_num() * (cost_den / cb[r].get_den());

  if (const auto dixon = DixonSolver::create(std::move(scaled))) {
    auto xb = dixon->solve(rhs, false);
    auto w = dixon->solve(cost, true);
    if (xb && w) {
      std::vector<Rational> y(m);
      for (std::size_t i = 0; i < m; ++i) {
        y[i] = (*w)[i] * Rational(row_scale[i]) / Rational(cost_den);
        y[i].canonicalize();
      }
      return std::make_pair(std::move(*xb), std::move(y));
    }
  }

  std::vector<std::vector<FastRational>> columns(m, std::vector<FastRational>(m));
  for (std::size_t r = 0; r < m; ++r)
    for (std::size_t i = 0; i < m; ++i) columns[r][i].assign(entry(i, r));
  const auto lu = ExactLu::factor(std::move(columns));
  if (!lu) return std::nullopt;
  return std::make_pair(lu->solve(lp.rhs), lu->solve_transposed(cb));
}

/// Exact primal/dual solution for a guessed basis. Returns nothing unless the basis is exactly
/// optimal: x_B >= 0, artificials at zero, and every reduced cost nonpositive.
inline std::optional<SimplexResult> verify_basis(const LinearProgram& lp, const std::vector<std::size_t>& basis) {
  const std::size_t m = lp.num_rows();
  const std::size_t n = lp.num_vars();
  auto systems = solve_basis_systems(lp, basis);
  if (!systems) return std::nullopt;
  const std::vector<Rational>& xb = systems->first;
  SimplexResult out;
  out.x.assign(n, Rational(0));
  out.basis.resize(m);
  std::vector<bool> basic(n, false);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) {
      if (sgn(xb[r]) < 0) return std::nullopt;
      out.x[basis[r]] = xb[r];
      out.basis[r] = basis[r];
      basic[basis[r]] = true;
    } else if (sgn(xb[r]) != 0) {
      return std::nullopt;
    }
  }
  out.dual = std::move(systems->second);
  for (std::size_t j = 0; j < n; ++j) {
    if (basic[j]) continue;
    Rational reduced = lp.objective[j];
    for (std::size_t i = 0; i < m; ++i) {
      const Rational& a = lp.rows[i][j];
      if (sgn(a) != 0 && sgn(out.dual[i]) != 0) reduced -= a * out.dual[i];
    }
    if (sgn(reduced) > 0) return std::nullopt;
  }
  for (std::size_t j = 0; j < n; ++j)
    if (sgn(out.x[j]) != 0) out.value += lp.objective[j] * out.x[j];
  out.status = LpStatus::optimal;
  return out;
}

}  // namespace detail

/// Exact LP solver. A double-precision simplex first proposes a basis, which is accepted only if
/// the exactly solved primal and dual are both feasible. Otherwise the exact tableau simplex runs
/// (Dantzig pricing, Bland fallback on degenerate stalls); when a feasible point is supplied
/// (checked exactly) it replaces phase 1 with a crossover from that point.
inline SimplexResult solve_simplex(const LinearProgram& lp, std::span<const Rational> feasible_point = {}) {
  if (lp.num_rows() == 0) throw InvalidArgument("linear program without constraints");
  if (lp.rhs.size() != lp.num_rows()) throw DimensionMismatch("rhs length differs from the row count");
  for (const auto& row : lp.rows)
    if (row.size() != lp.num_vars()) throw DimensionMismatch("constraint row length differs from the variable count");
  if (!feasible_point.empty()) {
    if (feasible_point.size() != lp.num_vars()) throw DimensionMismatch("feasible point has the wrong length");
    for (const Rational& v : feasible_point)
      if (v < 0) throw InvalidArgument("feasible point has a negative coordinate");
    for (std::size_t i = 0; i < lp.num_rows(); ++i) {
      Rational lhs;
      for (std::size_t j = 0; j < lp.num_vars(); ++j)
        if (feasible_point[j] != 0) lhs += lp.rows[i][j] * feasible_point[j];
      if (lhs != lp.rhs[i]) throw InvalidArgument("supplied point violates row " + std::to_string(i));
    }
  }

  std::size_t float_pivots = 0;
  detail::FloatTableau guess(lp);
  if (const auto basis = guess.solve(float_pivots)) {
    if (auto verified = detail::verify_basis(lp, *basis)) {
      verified->pivots = float_pivots;
      return std::move(*verified);
    }
  }

  detail::Tableau tableau(lp);
  SimplexResult out = feasible_point.empty() ? tableau.solve_two_phase(lp) : tableau.solve_from_point(lp, feasible_point);
  out.pivots += float_pivots;
  return out;
}

}  // namespace kwise
