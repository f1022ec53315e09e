#pragma once

#include <string>
#include <vector>

#include "kwise/rational.hpp"
#include "kwise/simplex.hpp"

namespace kwise {

/// Outcome of checking a primal/dual pair against  max c.x, Ax = b, x >= 0  and its dual
/// min b.y, A^T y >= c. Works from the program data alone.
struct CertificateReport {
  bool primal_feasible = false;
  bool dual_feasible = false;
  bool complementary_slackness = false;
  bool objectives_match = false;
  std::string detail;

  bool ok() const { return primal_feasible && dual_feasible && complementary_slackness && objectives_match; }
};

inline CertificateReport verify_certificate(const LinearProgram& lp, const std::vector<Rational>& x,
                                            const std::vector<Rational>& y) {
  CertificateReport report;
  const std::size_t m = lp.rows.size();
  const std::size_t n = lp.objective.size();
  if (x.size() != n || y.size() != m || lp.rhs.size() != m) {
    report.detail = "certificate dimensions do not match the program";
    return report;
  }

  report.primal_feasible = true;
  for (std::size_t j = 0; j < n && report.primal_feasible; ++j) {
    if (x[j] < 0) {
      report.primal_feasible = false;
      report.detail = "x[" + std::to_string(j) + "] is negative";
    }
  }
  for (std::size_t i = 0; i < m && report.primal_feasible; ++i) {
    Rational lhs;
    for (std::size_t j = 0; j < n; ++j)
      if (x[j] != 0) lhs += lp.rows[i][j] * x[j];
    if (lhs != lp.rhs[i]) {
      report.primal_feasible = false;
      report.detail = "row " + std::to_string(i) + " violated";
    }
  }

  report.dual_feasible = true;
  report.complementary_slackness = true;
  for (std::size_t j = 0; j < n; ++j) {
    Rational column_value;
    for (std::size_t i = 0; i < m; ++i)
      if (y[i] != 0) column_value += lp.rows[i][j] * y[i];
    const Rational slack = column_value - lp.objective[j];
    if (slack < 0 && report.dual_feasible) {
      report.dual_feasible = false;
      if (report.detail.empty()) report.detail = "dual constraint " + std::to_string(j) + " violated";
    }
    if (x[j] != 0 && slack != 0 && report.complementary_slackness) {
      report.complementary_slackness = false;
      if (report.detail.empty()) report.detail = "slackness fails at column " + std::to_string(j);
    }
  }

  Rational primal, dual;
  for (std::size_t j = 0; j < n; ++j) primal += lp.objective[j] * x[j];
  for (std::size_t i = 0; i < m; ++i) dual += lp.rhs[i] * y[i];
  report.objectives_match = primal == dual;
  if (!report.objectives_match && report.detail.empty()) report.detail = "primal and dual objectives differ";
  return report;
}

}  // namespace kwise
