#pragma once

// Exact rational combinatorics on {0..m} and on the hypercube {0,1}^M.

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace massart {

using Integer = mpz_class;
using Rational = mpq_class;

namespace exactmath {

/// Largest cube dimension stored densely.
inline constexpr int kMaxDenseCubeDim = 22;

/// num/den in lowest terms.
Rational frac(const Integer& num, const Integer& den);

/// C(n, k); zero when k is outside [0, n].
Integer binomial(std::int64_t n, std::int64_t k);

/// 2^e as an exact rational (e may be negative).
Rational pow2(long e);

/// Bin(m, 1/2)(x) = C(m, x) / 2^m. Throws DomainError unless 0 <= x <= m.
Rational binom_pmf(int m, int x);

/// K_t(x; m) = sum_j (-1)^j C(x, j) C(m - x, t - j), closed binomial-sum form.
Integer kravchuk_eval(int t, int x, int m);

/// Sum of chi_T(y) over all |T| = t, with y holding x ones followed by m - x
/// zeros. Exponential; m <= 20.
Integer kravchuk_subset_oracle(int t, int x, int m);

/// K_0(x; m) .. K_tmax(x; m) by the three-term recurrence in the degree.
std::vector<Integer> kravchuk_column(int x, int m, int tmax);

/// A nonnegative measure on {0, ..., m} with exact weights. Not necessarily
/// normalized; operations state whether they normalize.
class UnivariateMeasure {
 public:
  UnivariateMeasure() = default;
  UnivariateMeasure(int m, std::vector<Rational> weights);

  static UnivariateMeasure binomial(int m);
  static UnivariateMeasure point_mass(int m, int x);

  int m() const noexcept { return m_; }
  const std::vector<Rational>& weights() const noexcept { return weights_; }
  const Rational& operator[](int x) const { return weights_.at(static_cast<std::size_t>(x)); }

  /// Total mass ||.||_1.
  Rational mass() const;
  bool is_probability() const { return mass() == 1; }
  /// Divides by the total mass. Throws DomainError for the zero measure.
  UnivariateMeasure normalized() const;

  friend bool operator==(const UnivariateMeasure&, const UnivariateMeasure&) = default;

 private:
  int m_ = 0;
  std::vector<Rational> weights_{Rational(0)};
};

/// E_{X~A}[K_t(X; m)] without normalizing A.
Rational measure_moment(const UnivariateMeasure& a, int t);

/// measure_moment for t = 0..tmax in one pass.
std::vector<Rational> measure_moments(const UnivariateMeasure& a, int tmax);

/// chi^2(P, Q) = sum_x P(x)^2 / Q(x) - 1 for probability measures.
/// Throws DivergenceInfinite if P charges a point where Q vanishes.
Rational chi_squared_div(const UnivariateMeasure& p, const UnivariateMeasure& q);

/// Dense pmf on {0,1}^M; point x is the integer whose bit i is x_i.
class CubePmf {
 public:
  CubePmf(int dim, std::vector<Rational> values);

  static CubePmf uniform(int dim);

  int dim() const noexcept { return dim_; }
  const std::vector<Rational>& values() const noexcept { return values_; }
  const Rational& operator()(std::uint64_t x) const { return values_[x]; }

 private:
  int dim_;
  std::vector<Rational> values_;
};

/// Pairwise correlation chi_base(p, q) = sum_x p(x) q(x) / base(x) - 1.
Rational chi_inner_product(const CubePmf& p, const CubePmf& q, const CubePmf& base);

/// hat p(T) = E_p[chi_T(X)] for every T (indexed as a bit mask), via the
/// Walsh-Hadamard butterfly.
std::vector<Rational> fourier_coefficients(const CubePmf& p);

/// sum_T hat p(T) hat q(T) - 1, the Fourier side of the uniform-base correlation.
Rational chi_uniform_fourier(const CubePmf& p, const CubePmf& q);

/// "num/den" (the denominator is always written).
std::string to_string(const Rational& r);

/// Accepts "num/den", an integer, or a finite decimal such as "-0.125" or "1e-6".
Rational parse_rational(std::string_view text);

/// Decimal rendering with `digits` fractional digits, truncated toward zero.
std::string to_decimal(const Rational& r, int digits = 20);

}  // namespace exactmath
}  // namespace massart
