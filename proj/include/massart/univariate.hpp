#pragma once

// One-dimensional measures D-, mu, D+ and the forbidden set J, with audits of
// the properties the hard instances rely on.

#include <optional>
#include <string>
#include <vector>

#include "massart/errors.hpp"
#include "massart/exactmath.hpp"
#include "massart/interval.hpp"

namespace massart::univariate {

using exactmath::UnivariateMeasure;

struct UnivariateParams {
  int m = 0;
  int s = 0;
  int d = 0;
  int k = 0;
  /// c in log(1/zeta) = c (ds)^2 / m.
  Rational zeta_log_const{1, 100};

  friend bool operator==(const UnivariateParams&, const UnivariateParams&) = default;
};

struct ParamCheck {
  std::string name;
  bool pass = false;
  /// Non-gating checks are reported but do not block construction.
  bool gating = true;
  std::string detail;
};

struct ParamReport {
  std::vector<ParamCheck> checks;
  Interval zeta;

  bool ok() const;
  /// First failing gating check, if any.
  const ParamCheck* first_failure() const;
};

/// Decidable versions of the construction hypotheses plus the derived zeta.
ParamReport validate_params(const UnivariateParams& p);

/// Encloses zeta = exp(-c (ds)^2 / m).
Interval zeta_interval(const UnivariateParams& p);

struct ForbiddenSet {
  std::vector<int> points;  // ascending

  bool contains(int x) const;
  friend bool operator==(const ForbiddenSet&, const ForbiddenSet&) = default;
};

/// The d multiples of s in [0, m] closest to m/2; ties go to the smaller point.
ForbiddenSet build_forbidden_set(int m, int s, int d);

/// Bin(m, 1/2) restricted to multiples of s. Unnormalized.
UnivariateMeasure build_dminus(int m, int s);

/// Signed measure on {-s+1, ..., s-1} with mu(0) = -1 whose moments of
/// degree 0..k vanish.
class SignedCorrection {
 public:
  SignedCorrection() = default;
  SignedCorrection(int s, int k, std::vector<Rational> values);

  int s() const noexcept { return s_; }
  int k() const noexcept { return k_; }
  const std::vector<Rational>& values() const noexcept { return values_; }
  /// mu(i) for -s < i < s; zero outside.
  Rational at(int i) const;
  /// max_{i != 0} |mu(i)|.
  Rational max_off_center() const;
  /// sum_i mu(i) i^t.
  Rational moment(int t) const;
  /// mu(0) = -1 and every moment of degree 0..k vanishes.
  bool moments_vanish() const;

  friend bool operator==(const SignedCorrection&, const SignedCorrection&) = default;

 private:
  int s_ = 0;
  int k_ = 0;
  std::vector<Rational> values_;
};

/// Even polynomial q (coefficients of x^0..x^k) with q(0) >= (1/10) sum_{i!=0} |q(i)|.
/// Its existence rules out every mu with |mu(i)| < 1/10.
struct DualCertificate {
  int s = 0;
  std::vector<Rational> coeffs;

  Rational eval(const Rational& x) const;
  /// Exact check of the separating inequality.
  bool certifies() const;
};

class InfeasibleCorrection : public Error {
 public:
  InfeasibleCorrection(DualCertificate cert, const std::string& what)
      : Error(what), certificate_(std::move(cert)) {}
  const DualCertificate& certificate() const noexcept { return certificate_; }

 private:
  DualCertificate certificate_;
};

/// Symmetric mu minimizing max |mu(i)| with all three invariants enforced;
/// throws InfeasibleCorrection (with a verified dual certificate) when the
/// optimum is not below 1/10.
SignedCorrection build_mu(int s, int k);

/// The symmetric min-max optimum without the 1/10 requirement. Returns the
/// achieved sup in `achieved`.
SignedCorrection minmax_mu(int s, int k, Rational* achieved = nullptr);

/// Small-scale fallback: a (not necessarily symmetric) mu chosen for the given
/// placement to maximize min_{x not in J} D+(x)/Bin(x). Returns nullopt if no
/// mu keeps D+ strictly positive off J.
std::optional<SignedCorrection> placement_mu(int m, int s, int k, const ForbiddenSet& J);

/// D+ = 3 Bin + sum_{z in J} 3 Bin(z) mu(. - z). Throws InfeasibleParams if a
/// shifted support leaves [0, m] or a weight turns negative.
UnivariateMeasure build_dplus(int m, const ForbiddenSet& J, const SignedCorrection& mu);

struct AuditCheck {
  std::string property;  // "1a", "1b", "2", "3", "4a", "4b", "5", ...
  bool pass = false;
  std::string detail;
};

struct Prop32Report {
  std::vector<AuditCheck> checks;

  bool dplus_zero_on_J = false;
  Rational dplus_ratio_min;  // min of D+/Bin off J
  Rational dplus_ratio_max;  // max of D+/Bin off J
  Rational dminus_mass_outside_J;  // realized zeta (normalized D-)
  Interval zeta;
  Rational nu_dplus;   // max_{1<=t<=k} |normalized D+ moment|
  Rational nu_dminus;  // same for D-
  Interval dminus_moment_bound;  // s C(m,k) cos(pi/s)^m
  Rational norm_dplus;
  Rational norm_dminus;

  bool all_pass() const;
  std::vector<std::string> failures() const;
};

/// s * C(m, k) * cos(pi/s)^m as an enclosure.
Interval dminus_moment_bound(int m, int s, int k);

/// max_{1<=t<=k} |E_{A/|A|}[K_t]|.
Rational max_normalized_moment(const UnivariateMeasure& a, int k);

Prop32Report audit_prop32(const UnivariateMeasure& dplus, const UnivariateMeasure& dminus,
                          const ForbiddenSet& J, const UnivariateParams& params);

}  // namespace massart::univariate
