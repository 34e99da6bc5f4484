#include "massart/sq_sim.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <thread>

#include "massart/errors.hpp"

namespace massart::sq {

using exactmath::binomial;
using exactmath::frac;
using exactmath::pow2;
using Json = nlohmann::ordered_json;

namespace {

void check_range(const Rational& v) {
  if (v < -1 || v > 1) throw ContractError("query value " + exactmath::to_string(v) + " outside [-1, 1]");
}

void validate(const QueryFn& f) {
  if (const auto* c = std::get_if<CharacterQuery>(&f)) {
    check_range(c->value_a);
    check_range(c->value_b);
  } else if (const auto* s = std::get_if<StatisticQuery>(&f)) {
    if (s->table.size() != s->R.size() + 1) throw ContractError("statistic table needs |R| + 1 rows");
    for (const auto& row : s->table) {
      check_range(row[0]);
      check_range(row[1]);
    }
  }
}

std::vector<int> sorted_unique(std::vector<int> v, int ambient) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw ContractError("query coordinates repeat");
  if (!v.empty() && (v.front() < 0 || v.back() >= ambient)) throw ContractError("query coordinate out of range");
  return v;
}

/// Law of sum_{i in R} x_i under p^A_S (A normalized).
std::vector<Rational> statistic_law(const junta::JuntaSpec& spec, const std::vector<int>& R) {
  const int m = spec.m();
  const int r = junta::overlap(spec.S(), R);
  const int u = static_cast<int>(R.size()) - r;
  std::vector<Rational> inner(static_cast<std::size_t>(r) + 1);
  const Rational cmr(binomial(m, r));
  for (int w = 0; w <= m; ++w) {
    const Rational& aw = spec.A()[w];
    if (aw == 0) continue;
    for (int i = std::max(0, r - (m - w)); i <= std::min(r, w); ++i)
      inner[i] += aw * Rational(binomial(w, i) * binomial(m - w, r - i)) / cmr;
  }
  std::vector<Rational> law(R.size() + 1);
  const Rational half_u = pow2(-u);
  for (int i = 0; i <= r; ++i) {
    if (inner[i] == 0) continue;
    for (int b = 0; b <= u; ++b) law[i + b] += inner[i] * Rational(binomial(u, b)) * half_u;
  }
  for (auto& v : law) v.canonicalize();
  return law;
}

Rational statistic_planted(const PlantedPair& pair, const std::vector<int>& R,
                           const std::vector<std::array<Rational, 2>>& table) {
  const auto lp = statistic_law(pair.plus, R);
  const auto lm = statistic_law(pair.minus, R);
  Rational ea = 0, eb = 0;
  for (std::size_t v = 0; v < table.size(); ++v) {
    ea += lp[v] * table[v][0];
    eb += lm[v] * table[v][1];
  }
  Rational out = pair.prior * ea + (1 - pair.prior) * eb;
  out.canonicalize();
  return out;
}

Rational statistic_null(const Rational& p, const std::vector<std::array<Rational, 2>>& table) {
  const int n = static_cast<int>(table.size()) - 1;
  Rational out = 0;
  for (int v = 0; v <= n; ++v) out += Rational(binomial(n, v)) * (p * table[v][0] + (1 - p) * table[v][1]);
  out *= pow2(-n);
  out.canonicalize();
  return out;
}

Rational enumerate(int ambient, const std::function<Rational(std::span<const std::uint8_t>, bool)>& fn,
                   const std::function<std::array<Rational, 2>(std::span<const std::uint8_t>)>& weight) {
  if (ambient > exactmath::kMaxDenseCubeDim) throw ResourceError("enumeration limited to M <= 22");
  Rational sum = 0;
  BitVector x(static_cast<std::size_t>(ambient));
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << ambient); ++v) {
    for (int i = 0; i < ambient; ++i) x[i] = (v >> i) & 1u;
    const auto w = weight(x);
    if (w[0] != 0) sum += w[0] * fn(x, true);
    if (w[1] != 0) sum += w[1] * fn(x, false);
  }
  sum.canonicalize();
  return sum;
}

}  // namespace

std::string describe(const QueryFn& f) {
  Json j;
  if (const auto* c = std::get_if<CharacterQuery>(&f)) {
    j = Json{{"type", "character"},
             {"T", c->T},
             {"value_a", exactmath::to_string(c->value_a)},
             {"value_b", exactmath::to_string(c->value_b)}};
  } else if (const auto* s = std::get_if<StatisticQuery>(&f)) {
    Json table = Json::array();
    for (const auto& row : s->table)
      table.push_back(Json::array({exactmath::to_string(row[0]), exactmath::to_string(row[1])}));
    j = Json{{"type", "statistic"}, {"R", s->R}, {"table", std::move(table)}};
  } else {
    j = Json{{"type", "function"}, {"name", std::get<FunctionQuery>(f).name}};
  }
  return j.dump();
}

Rational evaluate(const QueryFn& f, std::span<const std::uint8_t> x, bool is_a) {
  Rational v;
  if (const auto* c = std::get_if<CharacterQuery>(&f)) {
    int parity = 0;
    for (int i : c->T) parity ^= x[i] != 0;
    v = is_a ? c->value_a : c->value_b;
    if (parity) v = -v;
  } else if (const auto* s = std::get_if<StatisticQuery>(&f)) {
    std::size_t w = 0;
    for (int i : s->R) w += x[i] != 0;
    v = s->table.at(w)[is_a ? 0 : 1];
  } else {
    v = std::get<FunctionQuery>(f).fn(x, is_a);
  }
  check_range(v);
  return v;
}

Rational planted_expectation(const PlantedPair& pair, const QueryFn& f) {
  validate(f);
  const int M = pair.plus.ambient_dim();
  if (const auto* c = std::get_if<CharacterQuery>(&f)) {
    const auto T = sorted_unique(c->T, M);
    const int t = static_cast<int>(T.size());
    Rational ea = 1, eb = 1;
    if (t > 0) {
      if (junta::overlap(T, pair.plus.S()) < t) {
        ea = eb = 0;
      } else {
        ea = junta::fourier_levels(pair.plus.A(), t)[t];
        eb = junta::fourier_levels(pair.minus.A(), t)[t];
      }
    }
    Rational out = pair.prior * c->value_a * ea + (1 - pair.prior) * c->value_b * eb;
    out.canonicalize();
    return out;
  }
  if (const auto* s = std::get_if<StatisticQuery>(&f)) return statistic_planted(pair, sorted_unique(s->R, M), s->table);
  return enumerate(
      M, [&](std::span<const std::uint8_t> x, bool a) { return evaluate(f, x, a); },
      [&](std::span<const std::uint8_t> x) -> std::array<Rational, 2> {
        return {pair.prior * junta::junta_pmf(pair.plus, x), (1 - pair.prior) * junta::junta_pmf(pair.minus, x)};
      });
}

Rational null_expectation(const Rational& p, int ambient_dim, const QueryFn& f) {
  validate(f);
  if (const auto* c = std::get_if<CharacterQuery>(&f)) {
    sorted_unique(c->T, ambient_dim);
    if (!c->T.empty()) return 0;
    Rational out = p * c->value_a + (1 - p) * c->value_b;
    out.canonicalize();
    return out;
  }
  if (const auto* s = std::get_if<StatisticQuery>(&f)) {
    sorted_unique(s->R, ambient_dim);
    return statistic_null(p, s->table);
  }
  const Rational cell = pow2(-ambient_dim);
  return enumerate(
      ambient_dim, [&](std::span<const std::uint8_t> x, bool a) { return evaluate(f, x, a); },
      [&](std::span<const std::uint8_t>) -> std::array<Rational, 2> { return {p * cell, (1 - p) * cell}; });
}

// ---------------------------------------------------------------------------
// Session

OracleSession::OracleSession(std::vector<PlantedPair> family, Mode mode, Rational tau, Policy policy, Engine engine,
                             std::uint64_t seed)
    : family_(std::move(family)), mode_(mode), tau_(std::move(tau)), policy_(policy), engine_(engine), rng_(seed) {
  if (family_.empty()) throw ContractError("oracle session needs at least one planted pair");
  if (tau_ < 0) throw ContractError("tolerance must be nonnegative");
  const auto& first = family_.front();
  for (const auto& pair : family_) {
    if (pair.prior != first.prior || pair.labels != first.labels ||
        pair.plus.ambient_dim() != first.plus.ambient_dim() || pair.plus.m() != first.plus.m())
      throw ContractError("family members must share M, m, labels and prior");
  }
  if (engine_.kind == EngineKind::sampling) {
    if (engine_.samples < 1) throw ContractError("sampling engine needs a positive sample count");
    if (!(engine_.failure_probability > 0 && engine_.failure_probability < 1))
      throw ContractError("failure probability must lie in (0, 1)");
    // Hoeffding for values in [-1, 1], rounded up.
    const double eps = std::sqrt(2.0 * std::log(2.0 / engine_.failure_probability) / engine_.samples);
    sampling_bound_ = Rational(std::nextafter(eps, 2.0)) + pow2(-40);
  }
  if (mode_ == Mode::planted) hidden_ = static_cast<std::size_t>(rng_.below(family_.size()));
}

Rational OracleSession::tolerance() const {
  Rational t = tau_ + sampling_bound_;
  t.canonicalize();
  return t;
}

namespace {

Rational sample_mean(const QueryFn& f, long n, Rng& rng, const std::function<LabeledSample(Rng&)>& draw) {
  double sum = 0;
  for (long i = 0; i < n; ++i) {
    const auto s = draw(rng);
    sum += evaluate(f, s.x, s.is_a).get_d();
  }
  return Rational(sum / static_cast<double>(n));
}

}  // namespace

Rational OracleSession::hidden_expectation(const QueryFn& f) {
  if (engine_.kind == EngineKind::exact) {
    if (hidden_) return planted_expectation(family_[*hidden_], f);
    return null_expectation(prior(), ambient_dim(), f);
  }
  validate(f);
  if (hidden_) {
    const junta::PlantedSampler sampler(family_[*hidden_]);
    return sample_mean(f, engine_.samples, rng_, [&](Rng& r) { return sampler.draw(r); });
  }
  const Rational p = prior();
  const int M = ambient_dim();
  return sample_mean(f, engine_.samples, rng_, [&](Rng& r) { return junta::null_sample(p, M, r); });
}

Rational OracleSession::null_value(const QueryFn& f) {
  if (std::holds_alternative<FunctionQuery>(f) && ambient_dim() > exactmath::kMaxDenseCubeDim) {
    const Rational p = prior();
    const int M = ambient_dim();
    const long n = std::max(engine_.samples, 1L);
    return sample_mean(f, n, rng_, [&](Rng& r) { return junta::null_sample(p, M, r); });
  }
  return null_expectation(prior(), ambient_dim(), f);
}

Rational OracleSession::ask(const QueryFn& f) {
  const Rational truth = hidden_expectation(f);
  Rational answer;
  if (policy_ == Policy::toward_null) {
    const Rational null = null_value(f);
    const Rational delta = truth - null;
    if (abs(delta) <= tau_) {
      answer = null;
    } else {
      answer = delta > 0 ? Rational(truth - tau_) : Rational(truth + tau_);
    }
  } else {
    const Rational u = frac(Integer(static_cast<unsigned long>(rng_.next() >> 11)), Integer(1) << 53);
    answer = truth + tau_ * (2 * u - 1);
  }
  answer.canonicalize();
  log_.push_back({query_count(), describe(f), answer});
  return answer;
}

std::string OracleSession::transcript() const {
  std::string out;
  for (const auto& e : log_) {
    Json j{{"index", e.index}, {"query", Json::parse(e.query)}, {"answer", exactmath::to_string(e.answer)}};
    out += j.dump();
    out += '\n';
  }
  return out;
}

Rational SessionUnseal::hidden_truth(const OracleSession& s, const QueryFn& f) {
  if (s.hidden_) return planted_expectation(s.family_[*s.hidden_], f);
  return null_expectation(s.prior(), s.ambient_dim(), f);
}

// ---------------------------------------------------------------------------
// Losses and reductions

namespace {

std::vector<std::array<Rational, 2>> raw_loss_table(const StatisticHypothesis& h, const junta::Labels& labels,
                                                   LossKind kind) {
  if (h.values.size() != h.R.size() + 1) throw ContractError("hypothesis needs |R| + 1 values");
  std::vector<std::array<Rational, 2>> table(h.values.size());
  for (std::size_t v = 0; v < h.values.size(); ++v) {
    for (int l = 0; l < 2; ++l) {
      const Rational& y = l == 0 ? labels.a : labels.b;
      if (kind == LossKind::zero_one) {
        table[v][l] = h.values[v] == y ? 0 : 1;
      } else {
        table[v][l] = (h.values[v] - y) * (h.values[v] - y);
      }
    }
  }
  return table;
}

}  // namespace

LossEstimate estimate_loss(OracleSession& session, const StatisticHypothesis& h, LossKind kind) {
  auto table = raw_loss_table(h, session.labels(), kind);
  LossEstimate est;
  if (kind == LossKind::zero_one) {
    est.scale = 1;
    const Rational answer = session.ask(StatisticQuery{h.R, table});
    est.value = answer;
  } else {
    Rational bound = 0;
    for (const auto& row : table) bound = std::max({bound, row[0], row[1]});
    if (bound == 0) bound = 1;
    for (auto& row : table)
      for (auto& v : row) {
        v = 2 * v / bound - 1;
        v.canonicalize();
      }
    est.scale = bound / 2;
    const Rational answer = session.ask(StatisticQuery{h.R, std::move(table)});
    est.value = est.scale * (answer + 1);
  }
  est.scale.canonicalize();
  est.value.canonicalize();
  est.tolerance = est.scale * session.tolerance();
  est.tolerance.canonicalize();
  return est;
}

Rational planted_loss(const PlantedPair& pair, const StatisticHypothesis& h, LossKind kind) {
  const auto table = raw_loss_table(h, pair.labels, kind);
  return statistic_planted(pair, sorted_unique(h.R, pair.plus.ambient_dim()), table);
}

Rational null_loss_floor(const Rational& p, const junta::Labels& labels, LossKind kind) {
  Rational out = kind == LossKind::zero_one ? std::min(p, Rational(1 - p))
                                            : Rational(p * (1 - p) * (labels.a - labels.b) * (labels.a - labels.b));
  out.canonicalize();
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::null: return "null";
    case Verdict::planted: return "planted";
    case Verdict::undecided: return "undecided";
  }
  return "?";
}

ReductionResult threshold_reduction(OracleSession& session, const StatisticHypothesis& h, LossKind kind) {
  ReductionResult r;
  r.floor = null_loss_floor(session.prior(), session.labels(), kind);
  r.estimate = estimate_loss(session, h, kind);
  r.verdict = r.estimate.value < r.floor - r.estimate.tolerance ? Verdict::planted : Verdict::null;
  return r;
}

ParityResult parity_distinguisher(OracleSession& session, int degree_budget, long query_budget) {
  if (degree_budget < 1 || query_budget < 1) throw ContractError("budgets must be positive");
  ParityResult out;
  const int n = session.ambient_dim();
  const Rational limit = 2 * session.tolerance();
  for (int k = 1; k <= std::min(degree_budget, n); ++k) {
    std::vector<int> T(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) T[i] = i;
    for (;;) {
      if (out.queries >= query_budget) return out;
      const QueryFn f = CharacterQuery{T, 1, -1};
      const Rational answer = session.ask(f);
      ++out.queries;
      if (abs(answer - null_expectation(session.prior(), n, f)) > limit) {
        out.verdict = Verdict::planted;
        out.witness = T;
        return out;
      }
      // Next k-subset in colex order.
      int i = 0;
      while (i < k && T[i] + 1 == (i + 1 < k ? T[i + 1] : n)) ++i;
      if (i == k) break;
      ++T[i];
      for (int j = 0; j < i; ++j) T[j] = j;
    }
  }
  return out;
}

FamilyPowerStats family_power_audit(const std::vector<PlantedPair>& family, const QueryFn& f) {
  if (family.empty()) throw ContractError("empty family");
  FamilyPowerStats st;
  const std::size_t s = family.size();
  const Rational null = null_expectation(family.front().prior, family.front().plus.ambient_dim(), f);
  for (std::size_t i = 0; i < s; ++i) {
    const Rational d = planted_expectation(family[i], f) - null;
    Rational sq = d * d;
    sq.canonicalize();
    if (i == 0 || sq > st.max) {
      st.max = sq;
      st.argmax = i;
    }
    st.mean += sq;
    st.squared_deviations.push_back(std::move(sq));
  }
  st.mean /= Rational(static_cast<long>(s));
  st.mean.canonicalize();

  std::vector<Rational> row_sum(s);
  for (std::size_t i = 0; i < s; ++i) {
    for (std::size_t j = i; j < s; ++j) {
      const Rational g = junta::planted_correlation(family[i], family[j]);
      if (i == j) {
        st.beta = std::max(st.beta, g);
        row_sum[i] += abs(g);
      } else {
        st.gamma = std::max(st.gamma, Rational(abs(g)));
        row_sum[i] += abs(g);
        row_sum[j] += abs(g);
      }
    }
  }
  const Rational sr(static_cast<long>(s));
  st.gram_bound = (st.beta + (sr - 1) * st.gamma) / sr;
  st.gram_bound.canonicalize();
  st.gershgorin_bound = *std::max_element(row_sum.begin(), row_sum.end()) / sr;
  st.gershgorin_bound.canonicalize();
  return st;
}

// ---------------------------------------------------------------------------
// Brute-force recovery

unsigned worker_threads() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MASSART_FORGE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(v));
  }
  return n;
}

namespace {

double log_rational(const Rational& q) {
  if (q <= 0) return -std::numeric_limits<double>::infinity();
  long en = 0, ed = 0;
  const double fn = mpz_get_d_2exp(&en, q.get_num().get_mpz_t());
  const double fd = mpz_get_d_2exp(&ed, q.get_den().get_mpz_t());
  return std::log(fn) - std::log(fd) + static_cast<double>(en - ed) * std::log(2.0);
}

struct Partial {
  bool finite = false;
  double best = -std::numeric_limits<double>::infinity();
  long count = 0;
  std::vector<std::pair<long, std::uint64_t>> first;  // (enumeration index, mask)
};

std::uint64_t next_combination(std::uint64_t v) {
  const std::uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

}  // namespace

RecoveryResult brute_force_recover(const std::vector<LabeledSample>& samples, const PlantedPair& model) {
  const int M = model.plus.ambient_dim();
  const int m = model.plus.m();
  if (M > 63) throw ResourceError("brute-force recovery limited to M <= 63");
  if (m < 1 || m >= M) throw ContractError("recovery needs 1 <= m < M");
  const Integer total = binomial(M, m);
  if (total > Integer(100000000)) throw ResourceError("too many candidate subsets: " + total.get_str());

  std::vector<std::uint64_t> xs;
  std::vector<std::uint8_t> ys;
  xs.reserve(samples.size());
  for (const auto& s : samples) {
    if (static_cast<int>(s.x.size()) != M) throw ContractError("sample has the wrong dimension");
    std::uint64_t mask = 0;
    for (int i = 0; i < M; ++i)
      if (s.x[i]) mask |= std::uint64_t{1} << i;
    xs.push_back(mask);
    ys.push_back(s.is_a ? 0 : 1);
  }
  // Per-cell log of Pr[w, y] up to the subset-independent factor 2^{-(M-m)}.
  std::vector<double> logq(2 * (static_cast<std::size_t>(m) + 1));
  for (int w = 0; w <= m; ++w) {
    const Rational c(binomial(m, w));
    logq[2 * w] = log_rational(model.prior * model.plus.A()[w] / c);
    logq[2 * w + 1] = log_rational((1 - model.prior) * model.minus.A()[w] / c);
  }

  RecoveryResult out;
  out.subsets = total.get_si();
  const unsigned threads = std::max(1u, std::min<unsigned>(worker_threads(), static_cast<unsigned>(out.subsets)));
  std::vector<Partial> parts(threads);

  auto work = [&](unsigned tid) {
    Partial& part = parts[tid];
    std::vector<long> hist(logq.size());
    std::uint64_t R = (std::uint64_t{1} << m) - 1;
    for (long idx = 0; idx < out.subsets; ++idx) {
      if (idx > 0) R = next_combination(R);
      if (static_cast<unsigned>(idx % threads) != tid) continue;
      std::fill(hist.begin(), hist.end(), 0);
      bool finite = true;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        const std::size_t cell = 2 * static_cast<std::size_t>(std::popcount(xs[i] & R)) + ys[i];
        if (std::isinf(logq[cell])) {
          finite = false;
          break;
        }
        ++hist[cell];
      }
      double ll = -std::numeric_limits<double>::infinity();
      if (finite) {
        ll = 0;
        for (std::size_t c = 0; c < hist.size(); ++c)
          if (hist[c]) ll += static_cast<double>(hist[c]) * logq[c];
      }
      if (finite && !part.finite) {
        part = Partial{};
        part.finite = true;
        part.best = ll;
      }
      if (finite != part.finite) continue;
      if (finite && ll < part.best) continue;
      if (finite && ll > part.best) {
        part.best = ll;
        part.count = 0;
        part.first.clear();
      }
      ++part.count;
      if (part.first.size() < RecoveryResult::kMaxReported) part.first.emplace_back(idx, R);
    }
  };

  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }

  Partial merged;
  for (const auto& p : parts) {
    if (p.count == 0) continue;
    if (p.finite && (!merged.finite || p.best > merged.best)) {
      merged = p;
      continue;
    }
    if (p.finite != merged.finite || (p.finite && p.best < merged.best)) continue;
    merged.count += p.count;
    merged.first.insert(merged.first.end(), p.first.begin(), p.first.end());
  }
  std::sort(merged.first.begin(), merged.first.end());
  if (merged.first.size() > RecoveryResult::kMaxReported) merged.first.resize(RecoveryResult::kMaxReported);

  out.finite = merged.finite;
  out.log_likelihood = merged.best;
  out.argmax_count = merged.count;
  out.tie = merged.count > 1;
  for (const auto& [idx, mask] : merged.first) {
    std::vector<int> S;
    for (int i = 0; i < M; ++i)
      if ((mask >> i) & 1u) S.push_back(i);
    out.argmax.push_back(std::move(S));
  }
  return out;
}

}  // namespace massart::sq
