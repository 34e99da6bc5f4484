#include "massart/univariate.hpp"

#include <algorithm>
#include <sstream>

#include "massart/exact_lp.hpp"

namespace massart::univariate {

using exactmath::binom_pmf;
using exactmath::binomial;
using exactmath::frac;

namespace {

Rational ipow(long base, int e) {
  Integer out;
  mpz_pow_ui(out.get_mpz_t(), Integer(base).get_mpz_t(), static_cast<unsigned long>(e));
  return Rational(out);
}

std::string str(const Rational& r) { return exactmath::to_string(r); }

}  // namespace

// ---------------------------------------------------------------------------
// Parameters

bool ParamReport::ok() const { return first_failure() == nullptr; }

const ParamCheck* ParamReport::first_failure() const {
  for (const auto& c : checks) {
    if (c.gating && !c.pass) return &c;
  }
  return nullptr;
}

Interval zeta_interval(const UnivariateParams& p) {
  const Rational ds(static_cast<long>(p.d) * p.s);
  return interval::exp_neg(p.zeta_log_const * ds * ds / Rational(p.m));
}

ParamReport validate_params(const UnivariateParams& p) {
  ParamReport r;
  auto add = [&](std::string name, bool pass, bool gating, std::string detail) {
    r.checks.push_back({std::move(name), pass, gating, std::move(detail)});
  };
  const bool positive = p.m > 0 && p.s > 0 && p.d > 0 && p.k > 0 && p.zeta_log_const > 0;
  add("positive", positive, true, "m, s, d, k and c must be positive");
  if (!positive) {
    r.zeta = {0, 1};
    return r;
  }
  const long k4 = 10L * p.k * p.k * p.k * p.k;
  add("s >= 10*k^4", p.s >= k4, false,
      std::to_string(p.s) + " vs " + std::to_string(k4) + " (sufficient condition; mu is certified directly)");
  add("k < m/2", 2L * p.k < p.m, true, std::to_string(2L * p.k) + " < " + std::to_string(p.m));
  add("c <= 1/4", p.zeta_log_const <= Rational(1, 4), true, "c = " + str(p.zeta_log_const));
  const long s2d = static_cast<long>(p.s) * p.s * p.d;
  add("s^2*d <= m/10", 10L * s2d <= p.m, true,
      std::to_string(s2d) + " vs " + exactmath::to_decimal(frac(p.m, 10), 1));
  add("s >= 7", p.s >= 7, true, "mu with |mu(i)| < 1/10 needs 2s - 2 > 10 off-center points");
  add("d*s < m/4", 4L * p.d * p.s < p.m, true,
      std::to_string(static_cast<long>(p.d) * p.s) + " vs " + exactmath::to_decimal(frac(p.m, 4), 2));
  r.zeta = zeta_interval(p);
  return r;
}

// ---------------------------------------------------------------------------
// J and D-

bool ForbiddenSet::contains(int x) const { return std::binary_search(points.begin(), points.end(), x); }

ForbiddenSet build_forbidden_set(int m, int s, int d) {
  if (m < 0 || s < 1 || d < 1) throw DomainError("build_forbidden_set: need m >= 0, s >= 1, d >= 1");
  std::vector<int> multiples;
  for (int x = 0; x <= m; x += s) multiples.push_back(x);
  if (static_cast<int>(multiples.size()) < d) {
    throw InfeasibleParams("forbidden_set", "build_forbidden_set: only " + std::to_string(multiples.size()) +
                                                " multiples of " + std::to_string(s) + " in [0, " +
                                                std::to_string(m) + "], need " + std::to_string(d));
  }
  // |x - m/2| compared as |2x - m|; ties toward the smaller point.
  std::stable_sort(multiples.begin(), multiples.end(), [m](int a, int b) {
    const int da = std::abs(2 * a - m), db = std::abs(2 * b - m);
    return da != db ? da < db : a < b;
  });
  ForbiddenSet J;
  J.points.assign(multiples.begin(), multiples.begin() + d);
  std::sort(J.points.begin(), J.points.end());
  return J;
}

UnivariateMeasure build_dminus(int m, int s) {
  if (s < 1) throw DomainError("build_dminus: s must be positive");
  std::vector<Rational> w(static_cast<std::size_t>(m) + 1, Rational(0));
  for (int x = 0; x <= m; x += s) w[x] = binom_pmf(m, x);
  return UnivariateMeasure(m, std::move(w));
}

// ---------------------------------------------------------------------------
// mu

SignedCorrection::SignedCorrection(int s, int k, std::vector<Rational> values)
    : s_(s), k_(k), values_(std::move(values)) {
  if (s < 1 || k < 0 || values_.size() != static_cast<std::size_t>(2 * s - 1)) {
    throw DomainError("SignedCorrection: expected 2s - 1 values");
  }
  for (auto& v : values_) v.canonicalize();
}

Rational SignedCorrection::at(int i) const {
  if (i <= -s_ || i >= s_) return 0;
  return values_[static_cast<std::size_t>(i + s_ - 1)];
}

Rational SignedCorrection::max_off_center() const {
  Rational best = 0;
  for (int i = 1 - s_; i < s_; ++i) {
    if (i != 0) best = std::max(best, Rational(abs(at(i))));
  }
  return best;
}

Rational SignedCorrection::moment(int t) const {
  Rational sum = 0;
  for (int i = 1 - s_; i < s_; ++i) {
    // 0^0 = 1 so mu(0) enters the mass.
    sum += at(i) * (t == 0 ? Rational(1) : ipow(i, t));
  }
  return sum;
}

bool SignedCorrection::moments_vanish() const {
  if (at(0) != -1) return false;
  for (int t = 0; t <= k_; ++t) {
    if (moment(t) != 0) return false;
  }
  return true;
}

Rational DualCertificate::eval(const Rational& x) const {
  Rational acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
  return acc;
}

bool DualCertificate::certifies() const {
  const Rational q0 = eval(0);
  if (q0 <= 0) return false;
  Rational off = 0;
  for (int i = 1 - s; i < s; ++i) {
    if (i != 0) off += abs(eval(i));
  }
  return 10 * q0 >= off;
}

namespace {

std::vector<int> even_degrees(int k) {
  std::vector<int> e;
  for (int t = 0; t <= k; t += 2) e.push_back(t);
  return e;
}

/// Solves max q(0) subject to 2 sum_{i=1}^{s-1} |q(i)| <= 1 over even q of
/// degree <= k. Its optimum equals the min-max value of the primal.
DualCertificate dual_certificate(int s, int k) {
  const auto degrees = even_degrees(k);
  const std::size_t ny = degrees.size();
  const std::size_t nw = static_cast<std::size_t>(s - 1);
  DualCertificate cert;
  cert.s = s;
  cert.coeffs.assign(static_cast<std::size_t>(k) + 1, Rational(0));

  lp::Problem prob;
  prob.maximize = true;
  prob.objective.assign(ny + nw, Rational(0));
  prob.objective[0] = 1;
  prob.free.assign(ny + nw, false);
  for (std::size_t e = 0; e < ny; ++e) prob.free[e] = true;
  for (int i = 1; i < s; ++i) {
    for (int sign : {1, -1}) {
      lp::Constraint c;
      c.coeffs.assign(ny + nw, Rational(0));
      for (std::size_t e = 0; e < ny; ++e) c.coeffs[e] = sign * ipow(i, degrees[e]);
      c.coeffs[ny + static_cast<std::size_t>(i - 1)] = 1;
      c.relation = lp::Relation::greater_equal;
      c.rhs = 0;
      prob.constraints.push_back(std::move(c));
    }
  }
  lp::Constraint budget;
  budget.coeffs.assign(ny + nw, Rational(0));
  for (std::size_t j = 0; j < nw; ++j) budget.coeffs[ny + j] = 2;
  budget.relation = lp::Relation::less_equal;
  budget.rhs = 1;
  prob.constraints.push_back(std::move(budget));

  const auto sol = lp::solve(prob);
  if (sol.status == lp::Status::optimal) {
    for (std::size_t e = 0; e < ny; ++e) cert.coeffs[static_cast<std::size_t>(degrees[e])] = sol.x[e];
    return cert;
  }
  // Unbounded dual: q vanishes on every off-center point, q = prod (x^2 - i^2).
  std::vector<Rational> poly{Rational(1)};
  for (int i = 1; i < s; ++i) {
    std::vector<Rational> next(poly.size() + 2, Rational(0));
    for (std::size_t j = 0; j < poly.size(); ++j) {
      next[j + 2] += poly[j];
      next[j] -= poly[j] * i * i;
    }
    poly = std::move(next);
  }
  if (poly[0] < 0) {
    for (auto& c : poly) c = -c;
  }
  if (poly.size() > cert.coeffs.size()) throw Error("dual_certificate: unbounded dual with degree above k");
  std::copy(poly.begin(), poly.end(), cert.coeffs.begin());
  return cert;
}

SignedCorrection symmetric_values(int s, int k, const std::vector<Rational>& half) {
  std::vector<Rational> values(static_cast<std::size_t>(2 * s - 1), Rational(0));
  values[static_cast<std::size_t>(s - 1)] = -1;
  for (int i = 1; i < s; ++i) {
    values[static_cast<std::size_t>(s - 1 + i)] = half[static_cast<std::size_t>(i - 1)];
    values[static_cast<std::size_t>(s - 1 - i)] = half[static_cast<std::size_t>(i - 1)];
  }
  return SignedCorrection(s, k, std::move(values));
}

}  // namespace

SignedCorrection minmax_mu(int s, int k, Rational* achieved) {
  if (s < 2 || k < 0) throw DomainError("minmax_mu: need s >= 2 and k >= 0");
  // Symmetric ansatz mu(i) = mu(-i) = v_i; variables v_1..v_{s-1}, then t.
  const std::size_t nv = static_cast<std::size_t>(s - 1);
  lp::Problem prob;
  prob.objective.assign(nv + 1, Rational(0));
  prob.objective[nv] = 1;
  prob.free.assign(nv + 1, true);
  prob.free[nv] = false;
  for (int e : even_degrees(k)) {
    lp::Constraint c;
    c.coeffs.assign(nv + 1, Rational(0));
    for (int i = 1; i < s; ++i) c.coeffs[static_cast<std::size_t>(i - 1)] = 2 * ipow(i, e);
    c.relation = lp::Relation::equal;
    c.rhs = e == 0 ? 1 : 0;  // mu(0) = -1 contributes -0^e
    prob.constraints.push_back(std::move(c));
  }
  for (std::size_t j = 0; j < nv; ++j) {
    for (int sign : {1, -1}) {
      lp::Constraint c;
      c.coeffs.assign(nv + 1, Rational(0));
      c.coeffs[j] = sign;
      c.coeffs[nv] = -1;
      c.relation = lp::Relation::less_equal;
      c.rhs = 0;
      prob.constraints.push_back(std::move(c));
    }
  }
  const auto sol = lp::solve(prob);
  if (sol.status != lp::Status::optimal) {
    DualCertificate cert = dual_certificate(s, k);
    throw InfeasibleCorrection(std::move(cert), "minmax_mu: moment system has no solution for s=" +
                                                    std::to_string(s) + ", k=" + std::to_string(k));
  }
  if (achieved) *achieved = sol.value;
  std::vector<Rational> half(sol.x.begin(), sol.x.begin() + static_cast<std::ptrdiff_t>(nv));
  return symmetric_values(s, k, half);
}

SignedCorrection build_mu(int s, int k) {
  if (s < 1 || k < 0) throw DomainError("build_mu: need s >= 1 and k >= 0");
  if (2 * s - 2 <= 10) {
    // 2s - 2 off-center points of magnitude < 1/10 cannot carry mass 1.
    DualCertificate cert;
    cert.s = s;
    cert.coeffs.assign(static_cast<std::size_t>(k) + 1, Rational(0));
    cert.coeffs[0] = 1;
    throw InfeasibleCorrection(std::move(cert), "build_mu: capacity bound (2s-2)/10 <= 1 for s=" +
                                                    std::to_string(s));
  }
  Rational achieved;
  SignedCorrection mu = minmax_mu(s, k, &achieved);
  if (achieved >= Rational(1, 10)) {
    DualCertificate cert = dual_certificate(s, k);
    throw InfeasibleCorrection(std::move(cert), "build_mu: optimal sup |mu(i)| = " + str(achieved) +
                                                    " is not below 1/10 for s=" + std::to_string(s) +
                                                    ", k=" + std::to_string(k));
  }
  if (!mu.moments_vanish() || mu.max_off_center() >= Rational(1, 10)) {
    throw Error("build_mu: solver returned a correction violating its invariants");
  }
  return mu;
}

std::optional<SignedCorrection> placement_mu(int m, int s, int k, const ForbiddenSet& J) {
  if (s < 2 || J.points.empty()) throw DomainError("placement_mu: need s >= 2 and nonempty J");
  // Variables: mu(i) for i in [-s+1, s-1] \ {0}, then rho.
  const int nmu = 2 * s - 2;
  auto col = [s](int i) { return static_cast<std::size_t>(i < 0 ? i + s - 1 : i + s - 2); };
  const std::size_t rho = static_cast<std::size_t>(nmu);
  const std::size_t width = rho + 1;

  lp::Problem prob;
  prob.maximize = true;
  prob.objective.assign(width, Rational(0));
  prob.objective[rho] = 1;
  prob.free.assign(width, true);
  for (int t = 0; t <= k; ++t) {
    lp::Constraint c;
    c.coeffs.assign(width, Rational(0));
    for (int i = 1 - s; i < s; ++i) {
      if (i != 0) c.coeffs[col(i)] = t == 0 ? Rational(1) : ipow(i, t);
    }
    c.relation = lp::Relation::equal;
    c.rhs = t == 0 ? 1 : 0;
    prob.constraints.push_back(std::move(c));
  }
  for (int i = 1 - s; i < s; ++i) {
    if (i == 0) continue;
    bool outside = false;
    for (int z : J.points) outside = outside || z + i < 0 || z + i > m;
    if (outside) {
      lp::Constraint c;
      c.coeffs.assign(width, Rational(0));
      c.coeffs[col(i)] = 1;
      c.relation = lp::Relation::equal;
      c.rhs = 0;
      prob.constraints.push_back(std::move(c));
    }
  }
  for (int x = 0; x <= m; ++x) {
    if (J.contains(x)) continue;
    lp::Constraint c;
    c.coeffs.assign(width, Rational(0));
    bool touched = false;
    const Rational bx = binom_pmf(m, x);
    for (int z : J.points) {
      const int i = x - z;
      if (i <= -s || i >= s) continue;
      c.coeffs[col(i)] += 3 * binom_pmf(m, z) / bx;
      touched = true;
    }
    if (!touched) continue;
    c.coeffs[rho] = -1;
    c.relation = lp::Relation::greater_equal;
    c.rhs = -3;
    prob.constraints.push_back(std::move(c));
  }
  lp::Constraint cap;
  cap.coeffs.assign(width, Rational(0));
  cap.coeffs[rho] = 1;
  cap.relation = lp::Relation::less_equal;
  cap.rhs = 3;
  prob.constraints.push_back(std::move(cap));

  const auto sol = lp::solve(prob);
  if (sol.status != lp::Status::optimal || sol.value <= 0) return std::nullopt;
  std::vector<Rational> values(static_cast<std::size_t>(2 * s - 1), Rational(0));
  values[static_cast<std::size_t>(s - 1)] = -1;
  for (int i = 1 - s; i < s; ++i) {
    if (i != 0) values[static_cast<std::size_t>(i + s - 1)] = sol.x[col(i)];
  }
  return SignedCorrection(s, k, std::move(values));
}

UnivariateMeasure build_dplus(int m, const ForbiddenSet& J, const SignedCorrection& mu) {
  std::vector<Rational> w(static_cast<std::size_t>(m) + 1);
  for (int x = 0; x <= m; ++x) w[x] = 3 * binom_pmf(m, x);
  for (int z : J.points) {
    if (z < 0 || z > m) throw InfeasibleParams("support_in_range", "build_dplus: J point outside [0, m]");
    const Rational scale = 3 * binom_pmf(m, z);
    for (int i = 1 - mu.s(); i < mu.s(); ++i) {
      const Rational v = mu.at(i);
      if (v == 0) continue;
      const int x = z + i;
      if (x < 0 || x > m) {
        throw InfeasibleParams("support_in_range", "build_dplus: correction around " + std::to_string(z) +
                                                       " reaches " + std::to_string(x) + " outside [0, m]");
      }
      w[x] += scale * v;
    }
  }
  for (int x = 0; x <= m; ++x) {
    if (w[x] < 0) {
      throw InfeasibleParams("dplus_nonnegative", "build_dplus: D+ is negative at x=" + std::to_string(x));
    }
  }
  return UnivariateMeasure(m, std::move(w));
}

// ---------------------------------------------------------------------------
// Audit

bool Prop32Report::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const AuditCheck& c) { return c.pass; });
}

std::vector<std::string> Prop32Report::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.pass) out.push_back(c.property);
  }
  return out;
}

Interval dminus_moment_bound(int m, int s, int k) {
  return interval::scale(interval::cos_pi_over_pow(s, m), Rational(s) * Rational(binomial(m, k)));
}

Rational max_normalized_moment(const UnivariateMeasure& a, int k) {
  if (k < 1) return 0;
  const auto moments = exactmath::measure_moments(a.normalized(), std::min(k, a.m()));
  Rational best = 0;
  for (std::size_t t = 1; t < moments.size(); ++t) best = std::max(best, Rational(abs(moments[t])));
  return best;
}

Prop32Report audit_prop32(const UnivariateMeasure& dplus, const UnivariateMeasure& dminus,
                          const ForbiddenSet& J, const UnivariateParams& params) {
  const int m = params.m;
  if (dplus.m() != m || dminus.m() != m) throw DomainError("audit_prop32: measure size differs from params.m");
  Prop32Report r;
  auto add = [&](std::string prop, bool pass, std::string detail) {
    r.checks.push_back({std::move(prop), pass, std::move(detail)});
  };

  std::vector<Rational> bin(static_cast<std::size_t>(m) + 1);
  for (int x = 0; x <= m; ++x) bin[x] = binom_pmf(m, x);

  // 1a
  r.dplus_zero_on_J = true;
  int bad_1a = -1;
  for (int z : J.points) {
    if (z < 0 || z > m || dplus[z] != 0) {
      r.dplus_zero_on_J = false;
      if (bad_1a < 0) bad_1a = z;
    }
  }
  add("1a", r.dplus_zero_on_J, bad_1a < 0 ? "D+ = 0 on J" : "D+ nonzero at x=" + std::to_string(bad_1a));

  // 1b, ratio band, 4a, D- <= Bin
  bool gt_2dminus = true, le_4bin = true, dminus_le_bin = true;
  int bad_1b = -1, bad_4a = -1;
  bool first = true;
  for (int x = 0; x <= m; ++x) {
    if (dplus[x] > 4 * bin[x]) {
      le_4bin = false;
      if (bad_4a < 0) bad_4a = x;
    }
    if (dminus[x] > bin[x]) dminus_le_bin = false;
    if (J.contains(x)) continue;
    if (!(dplus[x] > 2 * dminus[x])) {
      gt_2dminus = false;
      if (bad_1b < 0) bad_1b = x;
    }
    const Rational ratio = dplus[x] / bin[x];
    if (first || ratio < r.dplus_ratio_min) r.dplus_ratio_min = ratio;
    if (first || ratio > r.dplus_ratio_max) r.dplus_ratio_max = ratio;
    first = false;
  }
  add("1b", gt_2dminus, bad_1b < 0 ? "D+ > 2 D- off J" : "fails at x=" + std::to_string(bad_1b));

  // 2
  r.norm_dplus = dplus.mass();
  r.norm_dminus = dminus.mass();
  r.zeta = zeta_interval(params);
  if (r.norm_dminus > 0) {
    Rational off = 0;
    for (int x = 0; x <= m; ++x) {
      if (!J.contains(x)) off += dminus[x];
    }
    r.dminus_mass_outside_J = off / r.norm_dminus;
  }
  add("2", r.norm_dminus > 0 && r.dminus_mass_outside_J <= r.zeta.lo,
      "realized " + exactmath::to_decimal(r.dminus_mass_outside_J, 12) + " vs zeta >= " +
          exactmath::to_decimal(r.zeta.lo, 12));

  // 3
  r.dminus_moment_bound = dminus_moment_bound(m, params.s, params.k);
  const bool masses_positive = r.norm_dplus > 0 && r.norm_dminus > 0;
  if (masses_positive) {
    r.nu_dplus = max_normalized_moment(dplus, params.k);
    r.nu_dminus = max_normalized_moment(dminus, params.k);
  }
  add("3", masses_positive && r.nu_dplus == 0 && r.nu_dminus <= r.dminus_moment_bound.lo,
      "nu(D+) = " + str(r.nu_dplus) + ", nu(D-) ~ " + exactmath::to_decimal(r.nu_dminus, 30));

  std::ostringstream band;
  band << "D+/Bin off J in [" << exactmath::to_decimal(r.dplus_ratio_min, 6) << ", "
       << exactmath::to_decimal(r.dplus_ratio_max, 6) << "]";
  add("4a", le_4bin, bad_4a < 0 ? "D+ <= 4 Bin" : "fails at x=" + std::to_string(bad_4a));
  add("band", !first && r.dplus_ratio_min > 2 && r.dplus_ratio_max < 4, band.str());
  add("4b", r.norm_dplus == 3, "||D+||_1 = " + str(r.norm_dplus));
  add("5", r.norm_dminus >= frac(1, 2L * params.s) && r.norm_dminus <= frac(2, params.s),
      "||D-||_1 ~ " + exactmath::to_decimal(r.norm_dminus, 12));
  add("dminus_le_bin", dminus_le_bin, "D- <= Bin pointwise");
  return r;
}

}  // namespace massart::univariate
