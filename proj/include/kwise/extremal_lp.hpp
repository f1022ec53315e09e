#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kwise/certificate.hpp"
#include "kwise/errors.hpp"
#include "kwise/independence.hpp"
#include "kwise/interval.hpp"
#include "kwise/moments.hpp"
#include "kwise/rational.hpp"
#include "kwise/sample_space.hpp"
#include "kwise/simplex.hpp"

namespace kwise {

inline constexpr unsigned long kMaxReducedDimension = 10000;
inline constexpr unsigned kMaxFullDimension = 12;

/// Average of prod_{i in T} x_i over the vectors of weight m (m coordinates equal to +1), for any
/// fixed |T| = j:  sum_t (-1)^(j-t) C(m,t) C(n-m, j-t) / C(n,j), a normalized Krawtchouk value.
inline Rational parity_class_coefficient(unsigned long n, unsigned long j, unsigned long m) {
  if (j > n || m > n) throw InvalidArgument("parity class coefficient needs j, m <= n");
  BigInt sum;
  for (unsigned long t = 0; t <= j; ++t) {
    BigInt term = binomial(m, t) * binomial(n - m, j - t);
    if (((j - t) & 1UL) != 0)
      sum -= term;
    else
      sum += term;
  }
  Rational out(sum, binomial(n, j));
  out.canonicalize();
  return out;
}

/// The exchangeable program: variables q_0..q_N (weight-class masses), one normalization row and
/// one vanishing-parity row per order j = 1..k, objective |2m - N|^p.
struct ReducedLp {
  unsigned long n = 0;
  unsigned long k = 0;
  Rational p;
  /// parity[j][m] = parity_class_coefficient(n, j, m); row 0 is the normalization.
  std::vector<std::vector<Rational>> parity;
  /// Exact objective, populated for integer p.
  std::vector<Rational> exact_objective;
  /// Enclosures of the objective, populated for non-integer p.
  std::vector<Interval> interval_objective;
  /// Empty: the reduced program is small enough for a plain two-phase start.
  std::vector<Rational> feasible_point;

  bool exact() const { return !exact_objective.empty(); }

  LinearProgram program(std::vector<Rational> objective) const {
    LinearProgram lp;
    lp.rows = parity;
    lp.rhs.assign(parity.size(), Rational(0));
    lp.rhs[0] = 1;
    lp.objective = std::move(objective);
    return lp;
  }
};

/// The unreduced program over all laws on {-1,1}^N: column x is the bitmask x, rows are the
/// normalization followed by E[prod_T eps] = 0 for 1 <= |T| <= k (by size, then lexicographic).
struct FullLp {
  unsigned n = 0;
  unsigned k = 0;
  Rational p;
  std::vector<std::vector<unsigned>> parity_sets;
  std::vector<std::vector<Rational>> rows;
  std::vector<Rational> exact_objective;
  std::vector<Interval> interval_objective;
  /// The uniform product law, used to start the simplex without a phase 1.
  std::vector<Rational> feasible_point;

  bool exact() const { return !exact_objective.empty(); }

  LinearProgram program(std::vector<Rational> objective) const {
    LinearProgram lp;
    lp.rows = rows;
    lp.rhs.assign(rows.size(), Rational(0));
    lp.rhs[0] = 1;
    lp.objective = std::move(objective);
    return lp;
  }
};

struct LpSolution {
  unsigned long n = 0;
  unsigned long k = 0;
  Rational p;
  /// Exact for integer p; otherwise an enclosure from the lower/upper objective programs.
  MomentValue optimal_value;
  /// Enclosure of optimal_value^(1/p) / ||a||_2.
  Interval ratio;
  std::variant<WeightProfile, SampleSpace> optimizer;
  std::vector<Rational> dual;
  /// Variables of the reported optimal basis.
  std::vector<std::size_t> basis;
  /// Single-vertex optimal face; reduced programs with exact data only.
  std::optional<bool> unique;
  bool certificate_ok = false;
  std::optional<std::string> note;
};

namespace detail {

inline void check_lp_exponent(const Rational& p) {
  if (p < 1) throw InvalidArgument("exponent must be >= 1, got " + to_string(p));
}

inline std::vector<Rational> lower_endpoints(const std::vector<Interval>& v) {
  std::vector<Rational> out;
  out.reserve(v.size());
  for (const Interval& i : v) out.push_back(i.lo().to_rational());
  return out;
}

inline std::vector<Rational> upper_endpoints(const std::vector<Interval>& v) {
  std::vector<Rational> out;
  out.reserve(v.size());
  for (const Interval& i : v) out.push_back(i.hi().to_rational());
  return out;
}

inline std::vector<Rational> midpoints(const std::vector<Interval>& v) {
  std::vector<Rational> out;
  out.reserve(v.size());
  for (const Interval& i : v) out.push_back(i.midpoint().to_rational());
  return out;
}

inline SimplexResult solve_or_throw(const LinearProgram& lp, std::span<const Rational> start) {
  SimplexResult r = solve_simplex(lp, start);
  // The uniform product law is always feasible and the feasible set is a bounded polytope.
  if (r.status != LpStatus::optimal) throw InternalError("extremal program not solved to optimality");
  return r;
}

inline std::vector<std::size_t> basic_variables(const SimplexResult& r) {
  std::vector<std::size_t> out;
  for (const auto& b : r.basis)
    if (b) out.push_back(*b);
  return out;
}

/// Shared driver for exact and interval objectives. make_optimizer maps x to the law.
template <class Program, class MakeOptimizer>
LpSolution solve_program(const Program& prog, const Rational& norm2_squared, const PrecisionOptions& opts,
                         MakeOptimizer&& make_optimizer, auto&& rebuild_at) {
  if (prog.exact()) {
    const LinearProgram lp = prog.program(prog.exact_objective);
    SimplexResult r = solve_or_throw(lp, prog.feasible_point);
    const CertificateReport cert = verify_certificate(lp, r.x, r.dual);
    Interval ratio = ratio_from_moment(r.value, prog.p, norm2_squared, opts.initial_precision);
    return LpSolution{prog.n, prog.k, prog.p, r.value, std::move(ratio), make_optimizer(r.x),
                      r.dual, basic_variables(r), std::nullopt, cert.ok(), std::nullopt};
  }

  // Irrational objective: the optimum of the lower (upper) endpoint program bounds the true
  // optimum from below (above) because every feasible x is nonnegative.
  Program current = prog;
  mpfr_prec_t prec = current.interval_objective.front().precision();
  while (true) {
    const LinearProgram lo_lp = current.program(lower_endpoints(current.interval_objective));
    const LinearProgram hi_lp = current.program(upper_endpoints(current.interval_objective));
    const SimplexResult lo = solve_or_throw(lo_lp, prog.feasible_point);
    const SimplexResult hi = solve_or_throw(hi_lp, prog.feasible_point);
    Interval value(BigFloat(lo.value, MPFR_RNDD, prec), BigFloat(hi.value, MPFR_RNDU, prec));
    if (value.relative_width() > opts.relative_tolerance && prec < opts.max_precision) {
      prec *= 2;
      current = rebuild_at(prec);
      continue;
    }
    const LinearProgram mid_lp = current.program(midpoints(current.interval_objective));
    SimplexResult mid = solve_or_throw(mid_lp, prog.feasible_point);
    const bool cert = verify_certificate(lo_lp, lo.x, lo.dual).ok() && verify_certificate(hi_lp, hi.x, hi.dual).ok() &&
                      verify_certificate(mid_lp, mid.x, mid.dual).ok();
    Interval ratio = ratio_from_moment(value, prog.p, norm2_squared, prec);
    return LpSolution{prog.n, prog.k, prog.p, std::move(value), std::move(ratio), make_optimizer(mid.x),
                      mid.dual, basic_variables(mid), std::nullopt, cert, std::nullopt};
  }
}

}  // namespace detail

inline ReducedLp build_reduced_lp(unsigned long n, const Rational& p, unsigned long k,
                                  mpfr_prec_t prec = kDefaultPrecision) {
  if (n == 0 || n > kMaxReducedDimension)
    throw DimensionTooLarge("reduced program supports 1 <= N <= 10000, got " + std::to_string(n));
  if (k == 0 || k > n) throw InvalidArgument("independence order must lie in [1, N]");
  detail::check_lp_exponent(p);
  ReducedLp lp;
  lp.n = n;
  lp.k = k;
  lp.p = p;
  lp.parity.assign(k + 1, std::vector<Rational>(n + 1));
  for (unsigned long j = 0; j <= k; ++j)
    for (unsigned long m = 0; m <= n; ++m) lp.parity[j][m] = j == 0 ? Rational(1) : parity_class_coefficient(n, j, m);
  for (unsigned long m = 0; m <= n; ++m) {
    const Rational sum = Rational(2 * static_cast<long>(m) - static_cast<long>(n));
    if (is_integer(p))
      lp.exact_objective.push_back(pow(abs(sum), p.get_num().get_ui()));
    else
      lp.interval_objective.push_back(abs_pow(sum, p, prec));
  }
  return lp;
}

inline FullLp build_full_lp(unsigned n, const Rational& p, unsigned k, const Weights& a,
                            mpfr_prec_t prec = kDefaultPrecision) {
  if (n == 0 || n > kMaxFullDimension)
    throw DimensionTooLarge("full program enumerates 2^N columns; N must lie in [1, 12], got " + std::to_string(n));
  if (k == 0 || k > n) throw InvalidArgument("independence order must lie in [1, N]");
  if (a.size() != n) throw DimensionMismatch("weight vector length differs from N");
  detail::check_lp_exponent(p);
  FullLp lp;
  lp.n = n;
  lp.k = k;
  lp.p = p;
  const std::size_t columns = std::size_t{1} << n;
  lp.rows.emplace_back(columns, Rational(1));
  for (unsigned j = 1; j <= k; ++j) {
    for_each_combination(n, j, [&](std::span<const unsigned> coords) {
      std::uint64_t mask = 0;
      for (unsigned c : coords) mask |= std::uint64_t{1} << c;
      std::vector<Rational> row(columns);
      for (std::uint64_t x = 0; x < columns; ++x) row[x] = (std::popcount(~x & mask) & 1) != 0 ? -1 : 1;
      lp.rows.push_back(std::move(row));
      lp.parity_sets.emplace_back(coords.begin(), coords.end());
      return true;
    });
  }
  Rational uniform(1);
  mpz_mul_2exp(uniform.get_den_mpz_t(), uniform.get_den_mpz_t(), n);
  lp.feasible_point.assign(columns, uniform);
  for (std::uint64_t x = 0; x < columns; ++x) {
    const Rational dot = a.dot(x);
    if (is_integer(p))
      lp.exact_objective.push_back(pow(abs(dot), p.get_num().get_ui()));
    else
      lp.interval_objective.push_back(abs_pow(dot, p, prec));
  }
  return lp;
}

/// Optimal face of the exact reduced program is a single point. The face is read off the dual:
/// it is the feasible set restricted to columns with zero reduced cost, and it is a point iff
/// every such coordinate has equal maximum and minimum over it.
inline bool uniqueness_check(const LpSolution& solution, unsigned long n, const Rational& p, unsigned long k) {
  const auto* profile = std::get_if<WeightProfile>(&solution.optimizer);
  if (profile == nullptr || !std::holds_alternative<Rational>(solution.optimal_value))
    throw InvalidArgument("uniqueness check needs an exact reduced solution");
  if (profile->dimension() != n) throw DimensionMismatch("solution dimension differs from N");
  const ReducedLp reduced = build_reduced_lp(n, p, k);
  if (!reduced.exact()) throw InvalidArgument("uniqueness check needs an integer exponent");
  const LinearProgram lp = reduced.program(reduced.exact_objective);
  if (solution.dual.size() != lp.num_rows()) throw DimensionMismatch("dual length differs from the row count");

  std::vector<std::size_t> face;
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    Rational column_value;
    for (std::size_t i = 0; i < lp.num_rows(); ++i) column_value += lp.rows[i][j] * solution.dual[i];
    if (column_value == lp.objective[j]) face.push_back(j);
  }

  LinearProgram restricted;
  restricted.rhs = lp.rhs;
  restricted.rows.assign(lp.num_rows(), std::vector<Rational>(face.size()));
  for (std::size_t i = 0; i < lp.num_rows(); ++i)
    for (std::size_t c = 0; c < face.size(); ++c) restricted.rows[i][c] = lp.rows[i][face[c]];

  for (std::size_t c = 0; c < face.size(); ++c) {
    const Rational& current = (*profile)[static_cast<unsigned>(face[c])];
    for (int direction : {1, -1}) {
      restricted.objective.assign(face.size(), Rational(0));
      restricted.objective[c] = direction;
      const SimplexResult r = solve_simplex(restricted);
      if (r.status != LpStatus::optimal) throw InternalError("optimal face program not solved");
      if (r.value != direction * current) return false;
    }
  }
  return true;
}

/// Maximizes E|sum eps_i|^p over exchangeable k-wise independent laws on {-1,1}^N.
inline LpSolution solve_reduced(unsigned long n, const Rational& p, unsigned long k, const PrecisionOptions& opts = {}) {
  const ReducedLp reduced = build_reduced_lp(n, p, k, opts.initial_precision);
  auto make_profile = [&](const std::vector<Rational>& x) { return WeightProfile(static_cast<unsigned>(n), x); };
  auto rebuild = [&](mpfr_prec_t prec) { return build_reduced_lp(n, p, k, prec); };
  LpSolution solution = detail::solve_program(reduced, Rational(n), opts, make_profile, rebuild);
  if (reduced.exact()) solution.unique = uniqueness_check(solution, n, p, k);
  if (n % 2 != 0) solution.note = "odd N: computed value only, no closed form is claimed";
  return solution;
}

/// Maximizes E|<a, eps>|^p over all k-wise independent laws on {-1,1}^N (2^N variables).
inline LpSolution solve_full(unsigned n, const Rational& p, unsigned k, const Weights& a,
                             const PrecisionOptions& opts = {}) {
  const FullLp full = build_full_lp(n, p, k, a, opts.initial_precision);
  auto make_space = [&](const std::vector<Rational>& x) {
    std::vector<Atom> atoms;
    for (std::size_t j = 0; j < x.size(); ++j)
      if (x[j] != 0) atoms.push_back({j, x[j]});
    return SampleSpace(n, std::move(atoms));
  };
  auto rebuild = [&](mpfr_prec_t prec) { return build_full_lp(n, p, k, a, prec); };
  LpSolution solution = detail::solve_program(full, a.norm2_squared(), opts, make_space, rebuild);
  if (n % 2 != 0) solution.note = "odd N: computed value only, no closed form is claimed";
  return solution;
}

enum class EqualityFailure {
  none,
  dimension_mismatch,
  exponent_not_above_two,
  not_pairwise_independent,
  unequal_weight_magnitudes,
  support_outside_extremal_set,
  unanimous_mass_not_one_over_2n,
};

inline const char* to_string(EqualityFailure f) {
  switch (f) {
    case EqualityFailure::none: return "none";
    case EqualityFailure::dimension_mismatch: return "dimension-mismatch";
    case EqualityFailure::exponent_not_above_two: return "exponent-not-above-two";
    case EqualityFailure::not_pairwise_independent: return "not-pairwise-independent";
    case EqualityFailure::unequal_weight_magnitudes: return "unequal-weight-magnitudes";
    case EqualityFailure::support_outside_extremal_set: return "support-outside-extremal-set";
    case EqualityFailure::unanimous_mass_not_one_over_2n: return "unanimous-mass-not-1/(2N)";
  }
  return "unknown";
}

struct EqualityReport {
  bool holds = false;
  EqualityFailure reason = EqualityFailure::none;
  /// First offending atom, when the support condition fails.
  std::optional<std::uint64_t> offending_atom;
};

/// Structural conditions forced on an equality case of the sharp pairwise bound: equal |a_i|;
/// every atom agrees with sgn(a) everywhere, nowhere, or on exactly half the coordinates; and the
/// two unanimous atoms each carry mass exactly 1/(2N).
inline EqualityReport equality_support_check(const SampleSpace& space, const Weights& a, const Rational& p) {
  const unsigned n = space.dimension();
  if (a.size() != n) return {false, EqualityFailure::dimension_mismatch, std::nullopt};
  if (p <= 2) return {false, EqualityFailure::exponent_not_above_two, std::nullopt};
  if (n < 2 || !check_kwise(space, 2).passed()) return {false, EqualityFailure::not_pairwise_independent, std::nullopt};

  const Rational c = abs(a[0]);
  for (std::size_t i = 1; i < n; ++i)
    if (abs(a[i]) != c) return {false, EqualityFailure::unequal_weight_magnitudes, std::nullopt};

  std::uint64_t sign_mask = 0;
  for (unsigned i = 0; i < n; ++i)
    if (a[i] > 0) sign_mask |= std::uint64_t{1} << i;
  const std::uint64_t opposite = ~sign_mask & low_mask(n);

  for (const Atom& atom : space.atoms()) {
    const auto agreements = static_cast<unsigned>(n - std::popcount(atom.bits ^ sign_mask));
    const bool ok = agreements == n || agreements == 0 || (n % 2 == 0 && agreements == n / 2);
    if (!ok) return {false, EqualityFailure::support_outside_extremal_set, atom.bits};
  }

  Rational target(1, 2 * n);
  target.canonicalize();
  if (space.probability(sign_mask) != target || space.probability(opposite) != target)
    return {false, EqualityFailure::unanimous_mass_not_one_over_2n, std::nullopt};
  return {true, EqualityFailure::none, std::nullopt};
}

}  // namespace kwise
