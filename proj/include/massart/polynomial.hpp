#pragma once

// Dense univariate polynomials with exact rational coefficients.

#include <vector>

#include "massart/exactmath.hpp"

namespace massart {

class Polynomial {
 public:
  Polynomial() = default;
  /// Coefficients of x^0, x^1, ...; trailing zeros are dropped.
  explicit Polynomial(std::vector<Rational> coeffs);

  static Polynomial constant(const Rational& c);
  /// x - a.
  static Polynomial linear_root(const Rational& a);
  /// Lagrange interpolant of degree < xs.size() through (xs[i], ys[i]).
  static Polynomial interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys);

  const std::vector<Rational>& coeffs() const noexcept { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }

  Rational operator()(const Rational& x) const;
  Rational max_abs_coeff() const;

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rational& c) const;

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim();
  std::vector<Rational> coeffs_;
};

}  // namespace massart
