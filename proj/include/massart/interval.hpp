#pragma once

// Rational enclosures of irrational constants, computed with directed rounding.

#include "massart/exactmath.hpp"

namespace massart {

/// Closed interval [lo, hi] with exact rational endpoints.
struct Interval {
  Rational lo;
  Rational hi;

  Rational width() const { return hi - lo; }
  bool contains(const Rational& v) const { return lo <= v && v <= hi; }
};

namespace interval {

/// Working precision in bits. Enclosures of numbers of moderate size have
/// width well below 2^-64 at this precision.
inline constexpr long kPrecisionBits = 256;

/// Encloses exp(-x) for rational x >= 0.
Interval exp_neg(const Rational& x);

/// Encloses sqrt(x) for rational x >= 0.
Interval sqrt(const Rational& x);

/// Encloses cos(pi / s)^m for s >= 2.
Interval cos_pi_over_pow(long s, long m);

/// Encloses 1 / sqrt(x) for rational x > 0.
Interval inv_sqrt(const Rational& x);

/// Midpoint-free scaling: [c*lo, c*hi] for c >= 0.
Interval scale(const Interval& iv, const Rational& c);

}  // namespace interval
}  // namespace massart
