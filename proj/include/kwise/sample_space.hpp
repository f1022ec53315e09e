#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kwise/errors.hpp"
#include "kwise/rational.hpp"

namespace kwise {

/// Largest dimension representable by a SignVector bitmask.
inline constexpr unsigned kMaxDimension = 63;
/// Largest dimension for which 2^n atoms are enumerated explicitly.
inline constexpr unsigned kMaxEnumerationDimension = 24;

inline std::uint64_t low_mask(unsigned n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

/// A point of {-1,1}^n; bit i of the mask is set iff coordinate i equals +1.
class SignVector {
 public:
  SignVector(unsigned n, std::uint64_t bits) : n_(n), bits_(bits) {
    if (n == 0 || n > kMaxDimension)
      throw DimensionTooLarge("sign vector dimension must lie in [1, 63], got " + std::to_string(n));
    if ((bits & ~low_mask(n)) != 0) throw InvalidArgument("sign vector has bits beyond its dimension");
  }

  static SignVector all_plus(unsigned n) { return {n, low_mask(n)}; }
  static SignVector all_minus(unsigned n) { return {n, 0}; }

  /// Parses a '+'/'-' string, coordinate 0 first; U+2212 is accepted for minus.
  static SignVector parse(std::string_view text) {
    std::uint64_t bits = 0;
    unsigned n = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (n >= kMaxDimension) throw DimensionTooLarge("sign string longer than 63 coordinates");
      if (text[i] == '+') {
        bits |= std::uint64_t{1} << n;
      } else if (text[i] == '-') {
      } else if (text.substr(i, 3) == "\xE2\x88\x92") {
        i += 2;
      } else {
        throw ParseError("bad sign character in '" + std::string(text) + "'");
      }
      ++n;
    }
    return {n, bits};
  }

  unsigned size() const { return n_; }
  std::uint64_t bits() const { return bits_; }
  unsigned weight() const { return static_cast<unsigned>(std::popcount(bits_)); }

  int operator[](unsigned i) const {
    if (i >= n_) throw IndexOutOfRange("coordinate " + std::to_string(i) + " out of range");
    return ((bits_ >> i) & 1U) != 0 ? 1 : -1;
  }

  std::string to_string() const {
    std::string s(n_, '-');
    for (unsigned i = 0; i < n_; ++i)
      if (((bits_ >> i) & 1U) != 0) s[i] = '+';
    return s;
  }

  friend auto operator<=>(const SignVector&, const SignVector&) = default;

 private:
  unsigned n_;
  std::uint64_t bits_;
};

struct Atom {
  std::uint64_t bits;
  Rational prob;
};

/// Finitely supported probability measure on {-1,1}^n. Atoms are kept sorted by bitmask,
/// every probability is strictly positive, and the total mass is exactly one.
class SampleSpace {
 public:
  SampleSpace(unsigned n, std::vector<Atom> atoms) : n_(n), atoms_(std::move(atoms)) {
    if (n == 0 || n > kMaxDimension)
      throw DimensionTooLarge("sample space dimension must lie in [1, 63], got " + std::to_string(n));
    std::erase_if(atoms_, [](const Atom& a) { return a.prob == 0; });
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& a, const Atom& b) { return a.bits < b.bits; });
    Rational total;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      if (i > 0 && atoms_[i].bits == atoms_[i - 1].bits) throw InvalidArgument("duplicate atom in sample space");
      if ((atoms_[i].bits & ~low_mask(n)) != 0) throw InvalidArgument("atom has bits beyond the dimension");
      if (atoms_[i].prob < 0) throw InvalidArgument("negative atom probability");
      total += atoms_[i].prob;
    }
    if (total != 1) throw InvalidArgument("atom probabilities sum to " + kwise::to_string(total) + ", not 1");
  }

  static SampleSpace from_map(unsigned n, const std::map<std::uint64_t, Rational>& masses) {
    std::vector<Atom> atoms;
    atoms.reserve(masses.size());
    for (const auto& [bits, prob] : masses) atoms.push_back({bits, prob});
    return {n, std::move(atoms)};
  }

  static SampleSpace point_mass(const SignVector& v) { return {v.size(), {{v.bits(), Rational(1)}}}; }

  unsigned dimension() const { return n_; }
  std::span<const Atom> atoms() const { return atoms_; }
  std::size_t support_size() const { return atoms_.size(); }
  SignVector point(const Atom& a) const { return {n_, a.bits}; }

  /// Probability of the given bitmask (zero off the support).
  Rational probability(std::uint64_t bits) const {
    auto it = std::lower_bound(atoms_.begin(), atoms_.end(), bits,
                               [](const Atom& a, std::uint64_t b) { return a.bits < b; });
    return it != atoms_.end() && it->bits == bits ? it->prob : Rational(0);
  }

  friend bool operator==(const SampleSpace& a, const SampleSpace& b) {
    if (a.n_ != b.n_ || a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i)
      if (a.atoms_[i].bits != b.atoms_[i].bits || a.atoms_[i].prob != b.atoms_[i].prob) return false;
    return true;
  }

 private:
  unsigned n_;
  std::vector<Atom> atoms_;
};

/// Exchangeable law summarized by q[m] = probability of the Hamming-weight-m class.
class WeightProfile {
 public:
  WeightProfile(unsigned n, std::vector<Rational> q) : n_(n), q_(std::move(q)) {
    if (n == 0) throw InvalidArgument("weight profile dimension must be positive");
    if (q_.size() != n + 1) throw DimensionMismatch("weight profile needs n+1 entries");
    Rational total;
    for (const Rational& v : q_) {
      if (v < 0) throw InvalidArgument("negative weight-class probability");
      total += v;
    }
    if (total != 1) throw InvalidArgument("weight-class probabilities sum to " + kwise::to_string(total) + ", not 1");
  }

  unsigned dimension() const { return n_; }
  std::span<const Rational> q() const { return q_; }
  const Rational& operator[](unsigned m) const { return q_.at(m); }

  friend bool operator==(const WeightProfile&, const WeightProfile&) = default;

 private:
  unsigned n_;
  std::vector<Rational> q_;
};

/// Exchangeable sample space spreading q[m] uniformly over the C(n,m) vectors of weight m.
inline SampleSpace expand(const WeightProfile& wp) {
  const unsigned n = wp.dimension();
  if (n > kMaxEnumerationDimension)
    throw DimensionTooLarge("expand enumerates 2^n atoms; n = " + std::to_string(n) + " exceeds 24");
  std::vector<Rational> per_atom(n + 1);
  for (unsigned m = 0; m <= n; ++m) per_atom[m] = wp[m] / Rational(binomial(n, m));
  std::vector<Atom> atoms;
  for (std::uint64_t bits = 0; bits <= low_mask(n); ++bits) {
    const auto m = static_cast<unsigned>(std::popcount(bits));
    if (wp[m] != 0) atoms.push_back({bits, per_atom[m]});
  }
  return {n, std::move(atoms)};
}

/// Pushforward onto the coordinates listed in coords; output coordinate r is input coordinate coords[r].
inline SampleSpace project_marginal(const SampleSpace& space, std::span<const unsigned> coords) {
  if (coords.empty()) throw InvalidArgument("marginal needs a nonempty coordinate set");
  std::uint64_t seen = 0;
  for (unsigned c : coords) {
    if (c >= space.dimension())
      throw IndexOutOfRange("coordinate " + std::to_string(c) + " out of range for dimension " +
                            std::to_string(space.dimension()));
    if (((seen >> c) & 1U) != 0) throw InvalidArgument("repeated coordinate in marginal");
    seen |= std::uint64_t{1} << c;
  }
  std::map<std::uint64_t, Rational> masses;
  for (const Atom& atom : space.atoms()) {
    std::uint64_t projected = 0;
    for (std::size_t r = 0; r < coords.size(); ++r)
      if (((atom.bits >> coords[r]) & 1U) != 0) projected |= std::uint64_t{1} << r;
    masses[projected] += atom.prob;
  }
  return SampleSpace::from_map(static_cast<unsigned>(coords.size()), masses);
}

inline WeightProfile symmetrize(const SampleSpace& space) {
  std::vector<Rational> q(space.dimension() + 1);
  for (const Atom& atom : space.atoms()) q[static_cast<unsigned>(std::popcount(atom.bits))] += atom.prob;
  return {space.dimension(), std::move(q)};
}

}  // namespace kwise
