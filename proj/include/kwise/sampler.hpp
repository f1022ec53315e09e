#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "kwise/constructions.hpp"
#include "kwise/errors.hpp"
#include "kwise/interval.hpp"
#include "kwise/moments.hpp"
#include "kwise/rational.hpp"
#include "kwise/sample_space.hpp"

namespace kwise {

/// SplitMix64 (Steele, Lea, Flood): 64-bit state, Weyl increment plus a murmur-style finalizer.
/// Not cryptographic; chosen because it is tiny, fully specified and splittable.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = -bound % bound;  // 2^64 mod bound
    while (true) {
      const std::uint64_t r = next();
      if (r >= limit) return r % bound;
    }
  }

  /// An independent stream seeded from this one.
  SplitMix64 split() { return SplitMix64(next()); }

 private:
  std::uint64_t state_;
};

enum class StreamKind { partition, xor_family, independent };

inline std::string_view to_string(StreamKind kind) {
  switch (kind) {
    case StreamKind::partition: return "partition";
    case StreamKind::xor_family: return "xor";
    case StreamKind::independent: return "independent";
  }
  return "?";
}

inline StreamKind parse_stream_kind(std::string_view text) {
  if (text == "partition") return StreamKind::partition;
  if (text == "xor") return StreamKind::xor_family;
  if (text == "independent") return StreamKind::independent;
  throw InvalidArgument("unknown stream kind '" + std::string(text) + "'");
}

/// kind plus size: N coordinates for partition/independent, the order n (N = 2^n) for xor.
struct StreamSpec {
  StreamKind kind = StreamKind::independent;
  unsigned n = 1;
  std::uint64_t seed = 0;
};

inline constexpr unsigned kMaxXorStreamOrder = 30;

/// One draw of the XOR family, held as its n+1 seed signs; coordinates are computed on demand.
class XorDraw {
 public:
  XorDraw(unsigned order, std::uint64_t seed) : order_(order), seed_(seed) {}

  unsigned order() const { return order_; }
  std::uint64_t size() const { return std::uint64_t{1} << order_; }
  std::uint64_t seed() const { return seed_; }

  int operator[](std::uint64_t j) const {
    if (j >= size()) throw IndexOutOfRange("xor coordinate " + std::to_string(j) + " out of range");
    return XorFamily::sign(seed_, j);
  }

 private:
  unsigned order_;
  std::uint64_t seed_;
};

class Sampler {
 public:
  explicit Sampler(const StreamSpec& spec) : spec_(spec), rng_(spec.seed) {
    switch (spec.kind) {
      case StreamKind::partition:
        if (spec.n == 0 || spec.n % 2 != 0) throw InvalidArgument("partition stream needs a positive even N");
        [[fallthrough]];
      case StreamKind::independent:
        if (spec.n == 0 || spec.n > kMaxDimension)
          throw DimensionTooLarge("stream dimension must lie in [1, 63], got " + std::to_string(spec.n));
        break;
      case StreamKind::xor_family:
        if (spec.n == 0 || spec.n > kMaxXorStreamOrder)
          throw DimensionTooLarge("xor stream order must lie in [1, 30], got " + std::to_string(spec.n));
        break;
    }
    if (spec.kind == StreamKind::partition) {
      template_.resize(spec.n);
      std::iota(template_.begin(), template_.end(), 0U);
    }
  }

  const StreamSpec& spec() const { return spec_; }

  /// Number of coordinates per draw.
  std::uint64_t dimension() const {
    return spec_.kind == StreamKind::xor_family ? std::uint64_t{1} << spec_.n : spec_.n;
  }

  /// Next draw as a sign vector; xor streams qualify only while 2^n <= 63.
  SignVector next() {
    const auto n = static_cast<unsigned>(spec_.n);
    switch (spec_.kind) {
      case StreamKind::independent:
        return {n, rng_.next() & low_mask(n)};
      case StreamKind::partition:
        return next_partition();
      case StreamKind::xor_family: {
        if (dimension() > kMaxDimension)
          throw DimensionTooLarge("xor draw has 2^n > 63 coordinates; use next_xor()");
        const XorDraw draw = next_xor();
        std::uint64_t bits = 0;
        for (std::uint64_t j = 0; j < draw.size(); ++j)
          if (draw[j] > 0) bits |= std::uint64_t{1} << j;
        return {static_cast<unsigned>(draw.size()), bits};
      }
    }
    throw InternalError("unhandled stream kind");
  }

  XorDraw next_xor() {
    if (spec_.kind != StreamKind::xor_family) throw InvalidArgument("next_xor() needs an xor stream");
    return {spec_.n, rng_.next() & low_mask(spec_.n + 1)};
  }

 private:
  SignVector next_partition() {
    const unsigned n = spec_.n;
    if (rng_.below(n) == 0) return (rng_.next() & 1U) != 0 ? SignVector::all_plus(n) : SignVector::all_minus(n);
    // Partial Fisher-Yates: the first n/2 slots of a shuffled index list get +1.
    std::uint64_t bits = 0;
    for (unsigned i = 0; i < n / 2; ++i) {
      const auto j = i + static_cast<unsigned>(rng_.below(n - i));
      std::swap(template_[i], template_[j]);
      bits |= std::uint64_t{1} << template_[i];
    }
    return {n, bits};
  }

  StreamSpec spec_;
  SplitMix64 rng_;
  std::vector<unsigned> template_;
};

struct McEstimate {
  BigFloat mean;
  /// Sample standard deviation over sqrt(samples).
  BigFloat std_error;
  std::uint64_t samples = 0;
};

inline constexpr std::uint64_t kMinMonteCarloSamples = 100;

/// Monte Carlo mean of |<a, x>|^p over draws of the stream (double accumulation, Welford).
inline McEstimate estimate_moment(const StreamSpec& spec, const Weights& a, const Rational& p, std::uint64_t samples) {
  if (samples < kMinMonteCarloSamples) throw InvalidArgument("estimate needs at least 100 samples");
  detail::check_exponent(p);
  Sampler sampler(spec);
  if (a.size() != sampler.dimension()) throw DimensionMismatch("weight vector length differs from the stream dimension");
  std::vector<double> w(a.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = a[i].get_d();
  const double pd = p.get_d();
  const bool even = is_even_integer(p);

  double mean = 0, m2 = 0;
  for (std::uint64_t t = 1; t <= samples; ++t) {
    double s = 0;
    if (spec.kind == StreamKind::xor_family) {
      const XorDraw draw = sampler.next_xor();
      for (std::uint64_t j = 0; j < w.size(); ++j) s += draw[j] > 0 ? w[j] : -w[j];
    } else {
      const std::uint64_t bits = sampler.next().bits();
      for (std::size_t j = 0; j < w.size(); ++j) s += ((bits >> j) & 1U) != 0 ? w[j] : -w[j];
    }
    const double v = even ? std::pow(s, pd) : std::pow(std::abs(s), pd);
    const double delta = v - mean;
    mean += delta / static_cast<double>(t);
    m2 += delta * (v - mean);
  }
  const auto count = static_cast<double>(samples);
  const double se = std::sqrt(m2 / (count - 1)) / std::sqrt(count);
  return {BigFloat(mean, 53), BigFloat(se, 53), samples};
}

}  // namespace kwise
