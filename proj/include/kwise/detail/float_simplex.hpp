#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "kwise/rational.hpp"

namespace kwise::detail {

/// Double-precision tableau simplex used only to guess an optimal basis; the exact solver
/// re-derives and verifies everything from the guessed basis. Variables >= n are artificials.
class FloatTableau {
 public:
  template <class Program>
  explicit FloatTableau(const Program& lp)
      : m_(lp.num_rows()), n_(lp.num_vars()), width_(n_ + m_ + 1), cells_(m_ * width_, 0.0), basis_(m_), cost_(width_) {
    for (std::size_t i = 0; i < m_; ++i) {
      const double s = lp.rhs[i] < 0 ? -1.0 : 1.0;
      double* row = &cells_[i * width_];
      for (std::size_t j = 0; j < n_; ++j) row[j] = s * lp.rows[i][j].get_d();
      row[n_ + i] = 1.0;
      // Distinct tiny shifts of the rhs break the heavy primal degeneracy that otherwise makes
      // the float iteration cycle. Exact verification uses the unperturbed data.
      row[width_ - 1] = s * lp.rhs[i].get_d() + kPerturbation * (1.0 + static_cast<double>((i * 2654435761u) % 1024) / 1024.0);
      basis_[i] = n_ + i;
    }
    double scale = 0;
    objective_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      objective_[j] = lp.objective[j].get_d();
      scale = std::max(scale, std::abs(objective_[j]));
    }
    if (scale > 0)
      for (double& c : objective_) c /= scale;
  }

  /// Basic variable per row of a (numerically) optimal basis, or nothing if the float solve
  /// failed to converge or found the program infeasible.
  std::optional<std::vector<std::size_t>> solve(std::size_t& pivots) {
    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      const double* row = &cells_[i * width_];
      for (std::size_t j = 0; j < n_; ++j) cost_[j] += row[j];
      cost_[width_ - 1] += row[width_ - 1];
    }
    if (!run(pivots)) return std::nullopt;
    for (std::size_t i = 0; i < m_; ++i)
      if (basis_[i] >= n_ && at(i, width_ - 1) > kFeasTol) return std::nullopt;
    for (std::size_t i = 0; i < m_; ++i) {
      if (basis_[i] < n_) continue;
      std::size_t best = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (std::abs(at(i, j)) > kPivotTol && !is_basic(j) && (best == n_ || std::abs(at(i, j)) > std::abs(at(i, best))))
          best = j;
      if (best < n_) {
        pivot(i, best);
        ++pivots;
      }
    }

    std::fill(cost_.begin(), cost_.end(), 0.0);
    for (std::size_t j = 0; j < n_; ++j) cost_[j] = objective_[j];
    for (std::size_t r = 0; r < m_; ++r) {
      if (basis_[r] >= n_) continue;
      const double cb = objective_[basis_[r]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j < width_; ++j) cost_[j] -= cb * at(r, j);
    }
    if (!run(pivots)) return std::nullopt;
    return basis_;
  }

 private:
  static constexpr double kPivotTol = 1e-9;
  static constexpr double kCostTol = 1e-10;
  static constexpr double kFeasTol = 1e-6;
  static constexpr double kPerturbation = 1e-7;

  double& at(std::size_t r, std::size_t c) { return cells_[r * width_ + c]; }

  bool is_basic(std::size_t j) const { return std::find(basis_.begin(), basis_.end(), j) != basis_.end(); }

  bool run(std::size_t& pivots) {
    constexpr std::size_t kStallLimit = 50;
    const std::size_t cap = 50 * (m_ + n_) + 1000;
    std::size_t stalled = 0;
    for (std::size_t iter = 0; iter < cap; ++iter) {
      const bool bland = stalled >= kStallLimit;
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j) {
        if (cost_[j] <= kCostTol) continue;
        if (enter == n_ || (!bland && cost_[j] > cost_[enter])) enter = j;
        if (bland) break;
      }
      if (enter == n_) return true;

      std::size_t leave = m_;
      double best = 0;
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(at(r, width_ - 1), 0.0) / a;
        if (leave == m_ || ratio < best - 1e-12 ||
            (ratio <= best + 1e-12 && (bland ? basis_[r] < basis_[leave] : a > at(leave, enter)))) {
          leave = r;
          best = ratio;
        }
      }
      if (leave == m_) return false;
      stalled = best <= 1e-12 ? stalled + 1 : 0;
      pivot(leave, enter);
      ++pivots;
    }
    return false;
  }

  void pivot(std::size_t pr, std::size_t pc) {
    double* prow = &cells_[pr * width_];
    const double inv = 1.0 / prow[pc];
    nonzero_.clear();
    for (std::size_t j = 0; j < width_; ++j) {
      if (prow[j] == 0) continue;
      prow[j] *= inv;
      nonzero_.push_back(j);
    }
    prow[pc] = 1.0;
    for (std::size_t r = 0; r < m_; ++r) {
      if (r == pr) continue;
      double* row = &cells_[r * width_];
      const double f = row[pc];
      if (f == 0) continue;
      for (std::size_t j : nonzero_) row[j] -= f * prow[j];
      row[pc] = 0.0;
    }
    const double f = cost_[pc];
    if (f != 0) {
      for (std::size_t j : nonzero_) cost_[j] -= f * prow[j];
      cost_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  std::size_t m_;
  std::size_t n_;
  std::size_t width_;
  std::vector<double> cells_;
  std::vector<std::size_t> basis_;
  std::vector<double> cost_;
  std::vector<double> objective_;
  std::vector<std::size_t> nonzero_;
};

}  // namespace kwise::detail
