#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "massart/exactmath.hpp"

namespace massart {

/// Seeded generator with platform-independent derived draws. std::mt19937_64
/// has a standardized output sequence; the std distributions do not, so the
/// derived draws are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, n), n >= 1, by rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t reject_below = (std::uint64_t{0} - n) % n;
    for (;;) {
      const std::uint64_t v = next();
      if (v >= reject_below) return v % n;
    }
  }

  /// Uniform on [0, 1) with 53 bits.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

/// floor(p * 2^64) clamped to the 64-bit range, for Bernoulli draws u < t.
std::uint64_t probability_threshold(const Rational& p);

/// Inverse-CDF sampler for a probability vector on {0, ..., n-1}, exact up to
/// a 2^-64 discretization.
class DiscreteSampler {
 public:
  explicit DiscreteSampler(const std::vector<Rational>& probabilities);
  std::size_t draw(Rng& rng) const;

 private:
  std::vector<std::uint64_t> thresholds_;
};

}  // namespace massart
