#include "massart/instances.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

#include "massart/errors.hpp"

namespace massart::instances {

using exactmath::binomial;
using exactmath::frac;
using univariate::SignedCorrection;
using univariate::UnivariateParams;

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::ltf: return "ltf";
    case Kind::relu: return "relu";
    case Kind::l2: return "l2";
  }
  return "?";
}

Kind parse_kind(const std::string& text) {
  if (text == "ltf") return Kind::ltf;
  if (text == "relu") return Kind::relu;
  if (text == "l2") return Kind::l2;
  throw DomainError("unknown instance kind '" + text + "'");
}

std::string to_string(AssemblyMode mode) { return mode == AssemblyMode::strict ? "strict" : "desk"; }

AssemblyMode parse_mode(const std::string& text) {
  if (text == "strict") return AssemblyMode::strict;
  if (text == "desk") return AssemblyMode::desk;
  throw DomainError("unknown assembly mode '" + text + "'");
}

std::string to_string(ActivationKind kind) {
  switch (kind) {
    case ActivationKind::sign: return "sign";
    case ActivationKind::relu_hat: return "relu_hat";
    case ActivationKind::rational_decay: return "rational_decay";
  }
  return "?";
}

ActivationKind parse_activation(const std::string& text) {
  if (text == "sign") return ActivationKind::sign;
  if (text == "relu_hat") return ActivationKind::relu_hat;
  if (text == "rational_decay") return ActivationKind::rational_decay;
  throw DomainError("unknown activation '" + text + "'");
}

// ---------------------------------------------------------------------------
// Gate polynomials

namespace {

int coeff_exponent(const Polynomial& poly, int m, int d) {
  const Rational bound = poly.max_abs_coeff();
  if (m < 2 || d < 1) return 0;
  Integer power = 1;
  Integer step;
  mpz_ui_pow_ui(step.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(d));
  int C = 0;
  while (Rational(power) < bound) {
    power *= step;
    ++C;
  }
  return C;
}

bool is_square(const Integer& v) { return v >= 0 && mpz_perfect_square_p(v.get_mpz_t()) != 0; }

Integer isqrt(const Integer& v) {
  Integer r;
  mpz_sqrt(r.get_mpz_t(), v.get_mpz_t());
  return r;
}

/// floor(x 2^bits) / 2^bits.
Rational dyadic_floor(const Rational& x, int bits) {
  Integer scaled = x.get_num() << bits;
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
  return frac(q, Integer(1) << bits);
}

}  // namespace

GatePolynomial build_gate_q(const ForbiddenSet& J, int m) {
  if (J.points.empty()) throw DomainError("gate polynomial needs a nonempty J");
  Polynomial q = Polynomial::constant(-1);
  for (int z : J.points) {
    const Rational zr(z);
    q = q * Polynomial({zr * zr - frac(1, 4), Rational(-2) * zr, Rational(1)});
  }
  GatePolynomial out;
  out.poly = q;
  out.role = GateRole::q;
  out.coeff_exponent = coeff_exponent(q, m, static_cast<int>(J.points.size()));
  bool first = true;
  for (int x = 0; x <= m; ++x) {
    const Rational v = q(Rational(x));
    if (J.contains(x)) {
      if (v <= 0) throw DomainError("gate q is not positive at a point of J");
      continue;
    }
    if (v >= 0) throw DomainError("gate q is not negative at x = " + std::to_string(x));
    const Rational mag = -v;
    if (first || mag < out.off_margin) out.off_margin = mag;
    first = false;
  }
  return out;
}

GatePolynomial build_unity_interpolant(const ForbiddenSet& J, const GatePolynomial& q, int m, int max_attempts) {
  if (q.role != GateRole::q) throw ContractError("unity interpolant needs the q gate");
  std::vector<Rational> xs;
  std::vector<Rational> qv;
  bool all_exact = true;
  for (int z : J.points) {
    xs.emplace_back(z);
    qv.push_back(q.poly(Rational(z)));
    if (!is_square(qv.back().get_num()) || !is_square(qv.back().get_den())) all_exact = false;
  }

  const int d = static_cast<int>(J.points.size());
  for (int attempt = 0; attempt < std::max(1, max_attempts); ++attempt) {
    const int bits = all_exact ? 0 : std::min(64 * (attempt + 1), 240);
    std::vector<Rational> rho;
    for (const auto& v : qv) {
      if (is_square(v.get_num()) && is_square(v.get_den())) {
        rho.push_back(frac(isqrt(v.get_den()), isqrt(v.get_num())));
      } else {
        rho.push_back(dyadic_floor(interval::inv_sqrt(v).lo, bits));
      }
    }
    const Polynomial r = Polynomial::interpolate(xs, rho);
    const Polynomial p0 = r * r * q.poly;
    std::vector<Rational> residual;
    for (const auto& x : xs) residual.push_back(Rational(1) - p0(x));
    const Polynomial p = p0 + Polynomial::interpolate(xs, residual);

    bool ok = true;
    for (int x = 0; x <= m && ok; ++x) {
      const Rational v = p(Rational(x));
      ok = J.contains(x) ? v == 1 : v <= 0;
    }
    if (ok) {
      GatePolynomial out;
      out.poly = p;
      out.role = GateRole::p;
      out.coeff_exponent = coeff_exponent(p, m, d);
      out.off_margin = q.off_margin;
      out.approximation_bits = bits;
      return out;
    }
    if (all_exact) break;
  }
  throw NumericMarginError("unity interpolant: p > 0 off J after " + std::to_string(max_attempts) +
                           " attempts; min off-J |q| = " + exactmath::to_string(q.off_margin));
}

// ---------------------------------------------------------------------------
// Activations

Rational ActivationSpec::operator()(const Rational& t) const {
  switch (kind) {
    case ActivationKind::sign: return t >= 0 ? Rational(1) : Rational(-1);
    case ActivationKind::relu_hat: return t < 0 ? Rational(-1) : Rational(-1 + 2 * t);
    case ActivationKind::rational_decay: {
      if (t >= 0) return 1;
      Rational v = Rational(-1) + Rational(2) / (Rational(1) - t);
      v.canonicalize();
      return v;
    }
  }
  return 0;
}

Rational ActivationSpec::c_plus() const { return kind == ActivationKind::rational_decay ? Rational(0) : Rational(1); }

Rational ActivationSpec::decay_bound(const Rational& abs_t) const {
  if (kind != ActivationKind::rational_decay) return 0;
  Rational v = Rational(2) / (Rational(1) + abs(abs_t));
  v.canonicalize();
  return v;
}

// ---------------------------------------------------------------------------
// Veronese coordinates

Integer veronese_dim(int n, int deg) {
  if (n < 0 || deg < 0) throw DomainError("veronese_dim arguments must be nonnegative");
  Integer total = 0;
  for (int j = 0; j <= std::min(deg, n); ++j) total += binomial(n, j);
  return total;
}

namespace {

std::size_t checked_dim(int n, int deg) {
  const Integer dim = veronese_dim(n, deg);
  if (dim > Integer(static_cast<unsigned long>(kMaxVeroneseDim)))
    throw ResourceError("Veronese dimension " + dim.get_str() + " exceeds the materialization cap");
  return dim.get_ui();
}

}  // namespace

std::size_t veronese_index(std::span<const int> T, int n) {
  const int j = static_cast<int>(T.size());
  Integer index = j == 0 ? Integer(0) : veronese_dim(n, j - 1);
  int prev = -1;
  for (int i = 0; i < j; ++i) {
    if (T[i] <= prev || T[i] >= n) throw DomainError("monomial indices must be ascending in [0, n)");
    for (int v = prev + 1; v < T[i]; ++v) index += binomial(n - 1 - v, j - 1 - i);
    prev = T[i];
  }
  return index.get_ui();
}

std::vector<std::vector<int>> veronese_monomials(int n, int deg) {
  std::vector<std::vector<int>> out;
  out.reserve(checked_dim(n, deg));
  for (int j = 0; j <= std::min(deg, n); ++j) {
    std::vector<int> T(static_cast<std::size_t>(j));
    std::iota(T.begin(), T.end(), 0);
    for (;;) {
      out.push_back(T);
      int i = j - 1;
      while (i >= 0 && T[i] == n - j + i) --i;
      if (i < 0) break;
      ++T[i];
      for (int l = i + 1; l < j; ++l) T[l] = T[l - 1] + 1;
    }
  }
  return out;
}

BitVector veronese_embed(std::span<const std::uint8_t> x, int deg) {
  if (deg < 1) throw DomainError("Veronese degree must be at least 1");
  const int n = static_cast<int>(x.size());
  BitVector out;
  out.reserve(checked_dim(n, deg));
  for (int j = 0; j <= std::min(deg, n); ++j) {
    std::vector<int> T(static_cast<std::size_t>(j));
    std::iota(T.begin(), T.end(), 0);
    for (;;) {
      std::uint8_t v = 1;
      for (int i : T) v &= x[i] != 0;
      out.push_back(v);
      int i = j - 1;
      while (i >= 0 && T[i] == n - j + i) --i;
      if (i < 0) break;
      ++T[i];
      for (int l = i + 1; l < j; ++l) T[l] = T[l - 1] + 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bundles

junta::PlantedPair InstanceBundle::pair() const {
  return junta::standard_pair(ambient, S, dplus, dminus, labels);
}

Polynomial InstanceBundle::composed() const {
  if (!gate) throw ContractError("bundle has no gate polynomial");
  if (kind != Kind::l2) return gate->poly;
  const Rational M(veronese_dim);
  return gate->poly * (activation.c_plus() + M) - Polynomial::constant(M);
}

namespace {

junta::Labels labels_for(Kind kind, const ActivationSpec& act) {
  switch (kind) {
    case Kind::ltf: return {1, -1};
    case Kind::relu: return {-1, 1};
    case Kind::l2: return {act.f_minus(), act.f_c_plus()};
  }
  return {};
}

ActivationSpec activation_for(Kind kind, const ActivationSpec& requested) {
  switch (kind) {
    case Kind::ltf: return {ActivationKind::sign};
    case Kind::relu: return {ActivationKind::relu_hat};
    case Kind::l2:
      if (requested.kind == ActivationKind::sign)
        throw ContractError("l2 instances need a fast-convergent activation");
      return requested;
  }
  return requested;
}

}  // namespace

InstanceBundle assemble_instance(Kind kind, const UnivariateParams& params, int ambient,
                                 const ActivationSpec& activation, std::uint64_t seed, AssemblyMode mode) {
  const int m = params.m;
  if (m < 1 || params.s < 1 || params.d < 1 || params.k < 0) throw InfeasibleParams("positive", "m, s, d must be positive");
  if (ambient < 2 * m)
    throw InfeasibleParams("ambient >= 2m", "ambient dimension " + std::to_string(ambient) + " is below 2m = " +
                                                std::to_string(2 * m));
  if (mode == AssemblyMode::strict) {
    const auto report = univariate::validate_params(params);
    if (const auto* fail = report.first_failure()) throw InfeasibleParams(fail->name, fail->name + ": " + fail->detail);
  }

  InstanceBundle b;
  b.kind = kind;
  b.mode = mode;
  b.params = params;
  b.ambient = ambient;
  b.seed = seed;
  b.activation = activation_for(kind, activation);
  b.labels = labels_for(kind, b.activation);
  b.J = univariate::build_forbidden_set(m, params.s, params.d);
  b.dminus = univariate::build_dminus(m, params.s);

  try {
    b.mu = univariate::build_mu(params.s, params.k);
    b.dplus = univariate::build_dplus(m, b.J, b.mu);
    b.mu_mode = "minmax";
  } catch (const univariate::InfeasibleCorrection& e) {
    if (mode == AssemblyMode::strict) throw InfeasibleParams("mu", e.what());
  } catch (const InfeasibleParams&) {
    if (mode == AssemblyMode::strict) throw;
  }
  if (b.mu_mode.empty()) {
    auto placed = univariate::placement_mu(m, params.s, params.k, b.J);
    if (!placed) throw InfeasibleParams("mu", "no correction keeps D+ positive off J");
    b.mu = std::move(*placed);
    b.dplus = univariate::build_dplus(m, b.J, b.mu);
    b.mu_mode = "placement";
  }

  Rng rng(seed);
  b.S = junta::random_subset(ambient, m, rng);
  const Rational np = b.dplus.mass();
  b.prior = np / (np + b.dminus.mass());
  b.prior.canonicalize();

  if (kind == Kind::ltf) {
    b.veronese_degree = 2 * params.d;
  } else {
    const auto q = build_gate_q(b.J, m);
    b.gate = build_unity_interpolant(b.J, q, m);
    b.veronese_degree = std::max(1, b.gate->poly.degree());
  }
  b.veronese_dim = veronese_dim(ambient, b.veronese_degree);
  b.prop32 = univariate::audit_prop32(b.dplus, b.dminus, b.J, params);
  b.audit = massart_audit(b);
  return b;
}

namespace {

std::vector<Rational> target_table(const InstanceBundle& b) {
  const int m = b.params.m;
  std::vector<Rational> out(static_cast<std::size_t>(m) + 1);
  if (b.kind == Kind::ltf) {
    for (int t = 0; t <= m; ++t) {
      Integer product = 1;
      for (int z : b.J.points) product *= Integer((t - z) * (t - z));
      out[t] = product == 0 ? -1 : 1;
    }
    return out;
  }
  const Polynomial P = b.composed();
  for (int t = 0; t <= m; ++t) out[t] = b.activation(P(Rational(t)));
  return out;
}

}  // namespace

Rational eval_target_statistic(const InstanceBundle& bundle, int t) {
  if (t < 0 || t > bundle.params.m) throw DomainError("statistic outside [0, m]");
  if (bundle.kind == Kind::ltf) {
    Integer product = 1;
    for (int z : bundle.J.points) product *= Integer((t - z) * (t - z));
    return product == 0 ? Rational(-1) : Rational(1);
  }
  return bundle.activation(bundle.composed()(Rational(t)));
}

Rational eval_target(const InstanceBundle& bundle, std::span<const std::uint8_t> x) {
  if (static_cast<int>(x.size()) != bundle.ambient) throw ContractError("point has the wrong dimension");
  int t = 0;
  for (int i : bundle.S) t += x[i] != 0;
  return eval_target_statistic(bundle, t);
}

// ---------------------------------------------------------------------------
// Massart audit

bool MassartReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

std::vector<std::string> MassartReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks)
    if (!c.pass) out.push_back(c.property);
  return out;
}

MassartReport massart_audit(const InstanceBundle& b) {
  const int m = b.params.m;
  if (b.dplus.m() != m || b.dminus.m() != m) throw ContractError("bundle measures do not match params.m");
  MassartReport r;
  auto add = [&](std::string prop, bool pass, std::string detail) {
    r.checks.push_back({std::move(prop), pass, std::move(detail)});
  };

  const Rational& p = b.prior;
  const Rational& a = b.labels.a;
  const Rational& lb = b.labels.b;
  const auto dp = b.dplus.normalized();
  const auto dm = b.dminus.normalized();
  const auto target = target_table(b);
  const Rational delta_f = b.activation.f_c_plus() - b.activation.f_minus();
  r.l2_budget = Rational(8) * delta_f * delta_f / 9;
  r.l2_budget.canonicalize();
  r.zeta = univariate::zeta_interval(b.params);

  bool odds_ok = true;
  int odds_bad = -1;
  bool labels_ok = true;
  int labels_bad = -1;
  bool first_off = true;
  const Polynomial composed = b.kind == Kind::ltf ? Polynomial() : b.composed();
  const Rational M(b.veronese_dim);

  for (int t = 0; t <= m; ++t) {
    const Rational ja = p * dp[t];
    const Rational jb = (1 - p) * dm[t];
    const bool in_J = b.J.contains(t);
    if (!in_J && dm[t] != 0) r.dminus_mass_off_J += dm[t];
    if (ja + jb == 0) continue;

    StatisticRow row;
    row.t = t;
    row.in_J = in_J;
    row.posterior_a = ja / (ja + jb);
    row.posterior_a.canonicalize();
    row.target = target[t];

    if (b.dminus[t] > 0 && ja / jb != b.dplus[t] / b.dminus[t]) {
      odds_ok = false;
      if (odds_bad < 0) odds_bad = t;
    }

    const Rational pa = row.posterior_a;
    if (b.kind == Kind::l2) {
      row.noise = pa * (a - row.target) * (a - row.target) + (1 - pa) * (lb - row.target) * (lb - row.target);
    } else {
      row.noise = (row.target == a ? Rational(0) : pa) + (row.target == lb ? Rational(0) : 1 - pa);
    }
    row.noise.canonicalize();

    r.opt_zero_one += (row.target == a ? Rational(0) : ja) + (row.target == lb ? Rational(0) : jb);
    r.opt_squared += ja * (row.target - a) * (row.target - a) + jb * (row.target - lb) * (row.target - lb);

    bool coherent;
    if (b.kind == Kind::l2) {
      if (in_J) {
        coherent = row.target == lb;
      } else {
        const Rational arg = composed(Rational(t));
        coherent = arg <= -M && abs(row.target - a) <= b.activation.decay_bound(-arg);
      }
    } else {
      coherent = row.target == (in_J ? lb : a);
    }
    if (!coherent) {
      labels_ok = false;
      if (labels_bad < 0) labels_bad = t;
    }

    if (in_J) {
      r.noise_rate_on_J = std::max(r.noise_rate_on_J, row.noise);
    } else if (first_off || row.noise > r.max_noise_rate_off_J) {
      r.max_noise_rate_off_J = row.noise;
      first_off = false;
    }
    r.rows.push_back(std::move(row));
  }
  r.opt_zero_one.canonicalize();
  r.opt_squared.canonicalize();
  r.dminus_mass_off_J.canonicalize();

  const std::string s = exactmath::to_decimal(r.max_noise_rate_off_J, 12);
  add("posterior_odds", odds_ok,
      odds_ok ? "posterior odds equal D+(t)/D-(t)" : "odds identity fails at t=" + std::to_string(odds_bad));
  add("noise_on_J", r.noise_rate_on_J == 0, "max on J = " + exactmath::to_decimal(r.noise_rate_on_J, 12));
  if (b.kind == Kind::l2) {
    add("noise_off_J", r.max_noise_rate_off_J <= r.l2_budget,
        "max conditional squared error off J = " + s + ", budget " + exactmath::to_decimal(r.l2_budget, 12));
  } else {
    add("noise_off_J", r.max_noise_rate_off_J <= frac(1, 3), "max off J = " + s + ", limit 1/3");
  }
  add("target_labels", labels_ok,
      labels_ok ? "target agrees with the noiseless label" : "target mismatch at t=" + std::to_string(labels_bad));

  const Rational base = (1 - p) * r.dminus_mass_off_J;
  if (b.kind == Kind::ltf) {
    r.opt_formula = base;
    add("opt_formula", r.opt_zero_one == base, "opt = " + exactmath::to_decimal(r.opt_zero_one, 12));
    add("opt_le_zeta", r.opt_zero_one <= r.dminus_mass_off_J && r.opt_zero_one <= r.zeta.lo,
        "opt <= realized zeta and <= zeta");
  } else if (b.kind == Kind::relu) {
    r.opt_formula = 4 * base;
    add("opt_formula", r.opt_zero_one == base && r.opt_squared == r.opt_formula,
        "squared opt = " + exactmath::to_decimal(r.opt_squared, 12));
    add("opt_le_zeta", r.opt_squared <= 4 * r.dminus_mass_off_J && r.opt_squared <= 4 * r.zeta.lo,
        "squared opt <= 4 realized zeta and <= 4 zeta");
  } else {
    r.opt_formula = base * delta_f * delta_f;
  }
  r.opt_formula.canonicalize();
  return r;
}

// ---------------------------------------------------------------------------
// Weights

namespace {

std::vector<std::vector<Integer>> stirling2(int n) {
  std::vector<std::vector<Integer>> S(static_cast<std::size_t>(n) + 1, std::vector<Integer>(n + 1, 0));
  S[0][0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= i; ++k) S[i][k] = Integer(k) * S[i - 1][k] + S[i - 1][k - 1];
  return S;
}

void for_each_subset(const std::vector<int>& S, int r, const std::function<void(const std::vector<int>&)>& fn) {
  const int n = static_cast<int>(S.size());
  if (r > n) return;
  std::vector<int> idx(static_cast<std::size_t>(r));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<int> T(static_cast<std::size_t>(r));
  for (;;) {
    for (int i = 0; i < r; ++i) T[i] = S[idx[i]];
    fn(T);
    int i = r - 1;
    while (i >= 0 && idx[i] == n - r + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int l = i + 1; l < r; ++l) idx[l] = idx[l - 1] + 1;
  }
}

}  // namespace

int LtfWeights::eval(std::span<const std::uint8_t> veronese) const {
  if (veronese.size() != weights.size()) throw ContractError("Veronese vector has the wrong length");
  Integer sum = 0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    if (veronese[i] && sgn(weights[i]) != 0) sum += weights[i];
  return sum >= threshold ? 1 : -1;
}

LtfWeights ptf_to_ltf_weights(int ambient, const std::vector<int>& S, const ForbiddenSet& J) {
  std::vector<int> sorted = S;
  std::sort(sorted.begin(), sorted.end());
  const int d = static_cast<int>(J.points.size());
  Polynomial P = Polynomial::constant(1);
  for (int z : J.points) P = P * Polynomial::linear_root(Rational(z)) * Polynomial::linear_root(Rational(z));

  LtfWeights out;
  out.ambient = ambient;
  out.degree = 2 * d;
  out.weights.assign(checked_dim(ambient, out.degree), Integer(0));
  out.threshold = 1;

  // On {0,1}, w^j = sum_r r! S2(j, r) e_r where e_r sums the size-r monomials of S.
  const auto S2 = stirling2(out.degree);
  Integer factorial = 1;
  for (int r = 0; r <= out.degree; ++r) {
    if (r > 0) factorial *= r;
    Integer coeff = 0;
    for (int j = r; j <= P.degree(); ++j) coeff += P.coeffs()[j].get_num() * factorial * S2[j][r];
    coeff *= 2;
    if (coeff == 0) continue;
    for_each_subset(sorted, r, [&](const std::vector<int>& T) { out.weights[veronese_index(T, ambient)] = coeff; });
  }
  out.max_abs = 0;
  out.abs_sum = 0;
  for (const auto& w : out.weights) {
    const Integer a = abs(w);
    if (a > out.max_abs) out.max_abs = a;
    out.abs_sum += a;
  }
  return out;
}

LtfWeights ptf_to_ltf_weights(const InstanceBundle& bundle) {
  if (bundle.kind != Kind::ltf) throw ContractError("weights are defined for ltf bundles");
  return ptf_to_ltf_weights(bundle.ambient, bundle.S, bundle.J);
}

int UnitWeights::eval(std::span<const std::uint8_t> veronese) const {
  long sum = 0;
  for (std::size_t k = 0; k < sign.size(); ++k) {
    if (source[k] >= veronese.size()) throw ContractError("Veronese vector is too short");
    if (veronese[source[k]]) sum += sign[k];
  }
  return Integer(sum) >= threshold ? 1 : -1;
}

UnitWeights reduce_to_unit_weights(const LtfWeights& weights) {
  const Integer& W = weights.max_abs;
  for (const auto& w : weights.weights)
    if (mpz_odd_p(w.get_mpz_t())) throw ContractError("odd weight; evenize before reducing");
  if (W * Integer(static_cast<unsigned long>(weights.weights.size())) > Integer(static_cast<unsigned long>(kMaxVeroneseDim)))
    throw ResourceError("unit-weight expansion exceeds the cap");
  const long copies = W.get_si();
  UnitWeights out;
  out.threshold = weights.threshold;
  out.copies = W;
  out.sign.reserve(static_cast<std::size_t>(copies) * weights.weights.size());
  out.source.reserve(out.sign.capacity());
  for (std::size_t i = 0; i < weights.weights.size(); ++i) {
    const long positive = (weights.weights[i].get_si() + copies) / 2;
    for (long j = 0; j < copies; ++j) {
      out.sign.push_back(j < positive ? 1 : -1);
      out.source.push_back(i);
    }
  }
  return out;
}

}  // namespace massart::instances
