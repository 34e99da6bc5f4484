#pragma once

// Labeled hard instances: Massart halfspaces, ReLU neurons and L2-Massart
// neurons with a fast-convergent activation, built on a planted junta pair.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "massart/junta.hpp"
#include "massart/polynomial.hpp"
#include "massart/univariate.hpp"

namespace massart::instances {

using exactmath::UnivariateMeasure;
using junta::BitVector;
using univariate::AuditCheck;
using univariate::ForbiddenSet;

enum class Kind { ltf, relu, l2 };
enum class AssemblyMode { strict, desk };

std::string to_string(Kind kind);
Kind parse_kind(const std::string& text);
std::string to_string(AssemblyMode mode);
AssemblyMode parse_mode(const std::string& text);

enum class GateRole { q, p };

struct GatePolynomial {
  Polynomial poly;
  GateRole role = GateRole::q;
  /// Smallest integer C with every |coefficient| <= m^{C d}.
  int coeff_exponent = 0;
  /// Smallest |q(x)| over integers off J (for the q gate).
  Rational off_margin;
  /// Fractional bits used for 1/sqrt(q(x_i)); 0 when every root was exact.
  int approximation_bits = 0;

  friend bool operator==(const GatePolynomial&, const GatePolynomial&) = default;
};

/// q(x) = -prod_{z in J} ((x - z)^2 - 1/4); positive on J, negative at other integers of [0, m].
GatePolynomial build_gate_q(const ForbiddenSet& J, int m);

/// p with p = 1 on J and p <= 0 at the other integers of [0, m]. Throws
/// NumericMarginError after `max_attempts` precision increases.
GatePolynomial build_unity_interpolant(const ForbiddenSet& J, const GatePolynomial& q, int m, int max_attempts = 4);

enum class ActivationKind { sign, relu_hat, rational_decay };

/// sign, relu_hat(t) = -1 for t < 0 and -1 + 2t otherwise, or the
/// rational-decay activation f(t) = 1 for t >= 0 and -1 + 2/(1 + |t|) for t < 0.
struct ActivationSpec {
  ActivationKind kind = ActivationKind::sign;

  Rational operator()(const Rational& t) const;
  Rational f_minus() const { return -1; }
  Rational c_plus() const;
  Rational f_c_plus() const { return (*this)(c_plus()); }
  /// Upper bound on |f(t) - f_minus| for t <= -|t|.
  Rational decay_bound(const Rational& abs_t) const;

  friend bool operator==(const ActivationSpec&, const ActivationSpec&) = default;
};

std::string to_string(ActivationKind kind);
ActivationKind parse_activation(const std::string& text);

/// Per value t of the statistic v_S^T x.
struct StatisticRow {
  int t = 0;
  bool in_J = false;
  Rational posterior_a;  // Pr[Y = a | t]
  Rational target;       // target value
  Rational noise;        // ltf/relu: Pr[Y != target | t]; l2: E[(Y - target)^2 | t]
};

struct MassartReport {
  std::vector<AuditCheck> checks;
  std::vector<StatisticRow> rows;

  Rational noise_rate_on_J;
  Rational max_noise_rate_off_J;
  Rational dminus_mass_off_J;  // normalized D-, the realized zeta
  Interval zeta;
  Rational opt_zero_one;  // E[target != Y] (ltf, relu)
  Rational opt_squared;   // E[(target - Y)^2]
  Rational opt_formula;   // (1-p) zeta_realized, times 4 for relu squared loss
  Rational l2_budget;     // 8 (f(c+) - f-)^2 / 9 for l2

  bool all_pass() const;
  std::vector<std::string> failures() const;
};

struct InstanceBundle {
  Kind kind = Kind::ltf;
  AssemblyMode mode = AssemblyMode::strict;
  univariate::UnivariateParams params;
  int ambient = 0;
  std::vector<int> S;
  junta::Labels labels;
  Rational prior;
  UnivariateMeasure dplus;
  UnivariateMeasure dminus;
  univariate::SignedCorrection mu;
  std::string mu_mode;  // "minmax" or "placement"
  ForbiddenSet J;
  std::optional<GatePolynomial> gate;  // unity interpolant (relu, l2)
  ActivationSpec activation;
  int veronese_degree = 0;
  Integer veronese_dim;
  std::uint64_t seed = 0;
  univariate::Prop32Report prop32;
  MassartReport audit;

  junta::PlantedPair pair() const;
  /// Polynomial in v_S^T x fed to the activation: p (relu), (c+ + M) p - M (l2).
  Polynomial composed() const;
};

/// Builds D+-, J, mu, a random S of the ambient cube, labels, prior and gates,
/// then audits. Strict mode requires validate_params and the min-max mu; desk
/// mode records the parameter report and falls back to a placement mu.
InstanceBundle assemble_instance(Kind kind, const univariate::UnivariateParams& params, int ambient,
                                 const ActivationSpec& activation, std::uint64_t seed,
                                 AssemblyMode mode = AssemblyMode::strict);

/// Target as a function of t = v_S^T x.
Rational eval_target_statistic(const InstanceBundle& bundle, int t);
Rational eval_target(const InstanceBundle& bundle, std::span<const std::uint8_t> x);

MassartReport massart_audit(const InstanceBundle& bundle);

/// Cap on materialized Veronese coordinates.
inline constexpr std::size_t kMaxVeroneseDim = std::size_t{1} << 24;

/// sum_{j=0}^{deg} C(n, j).
Integer veronese_dim(int n, int deg);
/// Index of the multilinear monomial T (ascending) in degree-major, then
/// lexicographic order.
std::size_t veronese_index(std::span<const int> T, int n);
/// All monomials in index order.
std::vector<std::vector<int>> veronese_monomials(int n, int deg);
BitVector veronese_embed(std::span<const std::uint8_t> x, int deg);

/// L(v) = +1 iff sum_i weights[i] v_i >= threshold, over degree-`degree` Veronese coordinates.
struct LtfWeights {
  int ambient = 0;
  int degree = 0;
  std::vector<Integer> weights;
  Integer threshold;
  Integer max_abs;  // W
  Integer abs_sum;

  int eval(std::span<const std::uint8_t> veronese) const;
};

/// Even integer weights for the product-form PTF of the ltf target.
LtfWeights ptf_to_ltf_weights(int ambient, const std::vector<int>& S, const ForbiddenSet& J);
LtfWeights ptf_to_ltf_weights(const InstanceBundle& bundle);

/// Each Veronese coordinate i is copied W times; copy j carries sign[k] with
/// source[k] = i.
struct UnitWeights {
  std::vector<std::int8_t> sign;
  std::vector<std::size_t> source;
  Integer threshold;
  Integer copies;  // W

  int eval(std::span<const std::uint8_t> veronese) const;
};

/// Throws ContractError on an odd weight and ResourceError past kMaxVeroneseDim copies.
UnitWeights reduce_to_unit_weights(const LtfWeights& weights);

}  // namespace massart::instances
