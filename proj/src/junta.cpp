#include "massart/junta.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "massart/errors.hpp"

namespace massart::junta {

using exactmath::binomial;
using exactmath::frac;
using exactmath::pow2;

JuntaSpec::JuntaSpec(int ambient_dim, std::vector<int> S, UnivariateMeasure A)
    : ambient_dim_(ambient_dim), S_(std::move(S)), A_(std::move(A)) {
  if (ambient_dim_ < 1) throw DomainError("ambient dimension must be positive");
  if (static_cast<int>(S_.size()) != A_.m())
    throw ContractError("|S| = " + std::to_string(S_.size()) + " but the measure lives on {0.." +
                        std::to_string(A_.m()) + "}");
  std::sort(S_.begin(), S_.end());
  if (std::adjacent_find(S_.begin(), S_.end()) != S_.end()) throw ContractError("S has repeated coordinates");
  if (!S_.empty() && (S_.front() < 0 || S_.back() >= ambient_dim_))
    throw ContractError("S is not contained in [0, M)");
  if (!A_.is_probability()) throw ContractError("junta measure must be normalized");
}

int JuntaSpec::statistic(std::span<const std::uint8_t> x) const {
  if (static_cast<int>(x.size()) != ambient_dim_) throw ContractError("point has the wrong dimension");
  int w = 0;
  for (int i : S_) w += x[static_cast<std::size_t>(i)] != 0;
  return w;
}

PlantedPair::PlantedPair(JuntaSpec plus_, JuntaSpec minus_, Labels labels_, Rational prior_)
    : plus(std::move(plus_)), minus(std::move(minus_)), labels(std::move(labels_)), prior(std::move(prior_)) {
  if (plus.ambient_dim() != minus.ambient_dim() || plus.S() != minus.S())
    throw ContractError("planted pair components must share M and S");
  if (prior < 0 || prior > 1) throw DomainError("prior outside [0, 1]");
  if (labels.a == labels.b) throw ContractError("labels a and b must differ");
}

PlantedPair standard_pair(int ambient_dim, const std::vector<int>& S, const UnivariateMeasure& dplus,
                          const UnivariateMeasure& dminus, const Labels& labels) {
  const Rational np = dplus.mass();
  const Rational nm = dminus.mass();
  Rational p = np / (np + nm);
  p.canonicalize();
  return PlantedPair(JuntaSpec(ambient_dim, S, dplus.normalized()), JuntaSpec(ambient_dim, S, dminus.normalized()),
                     labels, p);
}

Rational junta_pmf(const JuntaSpec& spec, std::span<const std::uint8_t> x) {
  const int w = spec.statistic(x);
  const int m = spec.m();
  return pow2(-(spec.ambient_dim() - m)) * spec.A()[w] / Rational(binomial(m, w));
}

exactmath::CubePmf junta_cube_pmf(const JuntaSpec& spec) {
  const int M = spec.ambient_dim();
  if (M > exactmath::kMaxDenseCubeDim) throw ResourceError("cube too large to store densely");
  std::uint64_t mask = 0;
  for (int i : spec.S()) mask |= std::uint64_t{1} << i;
  const int m = spec.m();
  std::vector<Rational> per_weight(static_cast<std::size_t>(m) + 1);
  for (int w = 0; w <= m; ++w) per_weight[w] = pow2(-(M - m)) * spec.A()[w] / Rational(binomial(m, w));
  std::vector<Rational> values(std::size_t{1} << M);
  for (std::uint64_t x = 0; x < values.size(); ++x) values[x] = per_weight[std::popcount(x & mask)];
  return exactmath::CubePmf(M, std::move(values));
}

JuntaSampler::JuntaSampler(const JuntaSpec& spec) : spec_(&spec), weight_(spec.A().weights()) {}

BitVector JuntaSampler::draw(Rng& rng) const {
  const int M = spec_->ambient_dim();
  BitVector x(static_cast<std::size_t>(M), 0);
  std::uint64_t bits = 0;
  int available = 0;
  for (int i = 0; i < M; ++i) {
    if (available == 0) {
      bits = rng.next();
      available = 64;
    }
    x[i] = bits & 1u;
    bits >>= 1;
    --available;
  }
  const int t = static_cast<int>(weight_.draw(rng));
  std::vector<int> S = spec_->S();
  const int m = static_cast<int>(S.size());
  for (int i = 0; i < m; ++i) x[S[i]] = 0;
  for (int i = 0; i < t; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - i)));
    std::swap(S[i], S[j]);
    x[S[i]] = 1;
  }
  return x;
}

BitVector junta_sample(const JuntaSpec& spec, Rng& rng) { return JuntaSampler(spec).draw(rng); }

PlantedSampler::PlantedSampler(const PlantedPair& pair)
    : plus_(pair.plus), minus_(pair.minus), prior_threshold_(probability_threshold(pair.prior)) {}

LabeledSample PlantedSampler::draw(Rng& rng) const {
  LabeledSample out;
  out.is_a = rng.next() < prior_threshold_;
  out.x = out.is_a ? plus_.draw(rng) : minus_.draw(rng);
  return out;
}

LabeledSample planted_sample(const PlantedPair& pair, Rng& rng) { return PlantedSampler(pair).draw(rng); }

LabeledSample null_sample(const Rational& p, int ambient_dim, Rng& rng) {
  LabeledSample out;
  out.is_a = rng.next() < probability_threshold(p);
  out.x.resize(static_cast<std::size_t>(ambient_dim));
  std::uint64_t bits = 0;
  for (int i = 0; i < ambient_dim; ++i) {
    if (i % 64 == 0) bits = rng.next();
    out.x[i] = bits & 1u;
    bits >>= 1;
  }
  return out;
}

std::vector<Rational> fourier_levels(const UnivariateMeasure& a, int jmax) {
  if (!a.is_probability()) throw ContractError("Fourier levels need a normalized measure");
  if (jmax < 0 || jmax > a.m()) throw DomainError("level index outside [0, m]");
  std::vector<Rational> levels = exactmath::measure_moments(a, jmax);
  for (int j = 0; j <= jmax; ++j) {
    levels[j] /= Rational(binomial(a.m(), j));
    levels[j].canonicalize();
  }
  return levels;
}

Rational correlation_from_levels(int r, const std::vector<Rational>& a, const std::vector<Rational>& b) {
  if (r < 0 || r >= static_cast<int>(a.size()) || r >= static_cast<int>(b.size()))
    throw DomainError("not enough Fourier levels for the overlap");
  Rational sum = 0;
  for (int j = 1; j <= r; ++j) sum += Rational(binomial(r, j)) * a[j] * b[j];
  sum.canonicalize();
  return sum;
}

int overlap(const std::vector<int>& S, const std::vector<int>& T) {
  int r = 0;
  auto i = S.begin();
  auto j = T.begin();
  while (i != S.end() && j != T.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++r;
      ++i;
      ++j;
    }
  }
  return r;
}

namespace {

void require_comparable(const JuntaSpec& a, const JuntaSpec& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw ContractError("juntas live on different cubes");
  if (a.m() != b.m()) throw ContractError("juntas have different support sizes");
}

}  // namespace

Rational pairwise_correlation(const JuntaSpec& a, const JuntaSpec& b) {
  require_comparable(a, b);
  const int r = overlap(a.S(), b.S());
  return correlation_from_levels(r, fourier_levels(a.A(), r), fourier_levels(b.A(), r));
}

Rational pairwise_correlation_bruteforce(const JuntaSpec& a, const JuntaSpec& b) {
  require_comparable(a, b);
  if (a.ambient_dim() > 16) throw ResourceError("brute-force correlation limited to M <= 16");
  const auto pa = junta_cube_pmf(a);
  const auto pb = junta_cube_pmf(b);
  return exactmath::chi_inner_product(pa, pb, exactmath::CubePmf::uniform(a.ambient_dim()));
}

namespace {

void require_same_null(const PlantedPair& P, const PlantedPair& Q) {
  require_comparable(P.plus, Q.plus);
  if (P.prior != Q.prior) throw ContractError("planted pairs have different priors");
  if (P.labels != Q.labels) throw ContractError("planted pairs have different labels");
}

}  // namespace

Rational planted_correlation(const PlantedPair& P, const PlantedPair& Q) {
  require_same_null(P, Q);
  const Rational& p = P.prior;
  Rational out = p * pairwise_correlation(P.plus, Q.plus) + (1 - p) * pairwise_correlation(P.minus, Q.minus);
  out.canonicalize();
  return out;
}

Rational planted_correlation_bruteforce(const PlantedPair& P, const PlantedPair& Q) {
  require_same_null(P, Q);
  const int M = P.plus.ambient_dim();
  if (M > 12) throw ResourceError("brute-force planted correlation limited to M <= 12");
  const Rational& p = P.prior;
  const Rational cell = pow2(-M);
  Rational sum = 0;
  BitVector x(static_cast<std::size_t>(M));
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << M); ++v) {
    for (int i = 0; i < M; ++i) x[i] = (v >> i) & 1u;
    for (int label = 0; label < 2; ++label) {
      const Rational q = label == 0 ? p : 1 - p;
      const Rational base = q * cell;
      const Rational pv = q * junta_pmf(label == 0 ? P.plus : P.minus, x);
      const Rational qv = q * junta_pmf(label == 0 ? Q.plus : Q.minus, x);
      if (base == 0) {
        if (pv != 0 && qv != 0) throw DivergenceInfinite("planted mass where the null vanishes");
        continue;
      }
      sum += pv * qv / base;
    }
  }
  sum -= 1;
  sum.canonicalize();
  return sum;
}

Rational correlation_bound(int r, int m, int k, const Rational& chi2, const Rational& nu) {
  if (m < 1 || r < 0 || r > m || k < 0) throw DomainError("correlation bound arguments out of range");
  Rational ratio = frac(r, m);
  Rational power = 1;
  for (int i = 0; i <= k; ++i) power *= ratio;
  Rational out = power * chi2 + Rational(k) * nu * nu;
  out.canonicalize();
  return out;
}

std::vector<int> random_subset(int ambient_dim, int m, Rng& rng) {
  if (m < 0 || m > ambient_dim) throw DomainError("subset size outside [0, M]");
  std::vector<int> pool(static_cast<std::size_t>(ambient_dim));
  std::iota(pool.begin(), pool.end(), 0);
  for (int i = 0; i < m; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(ambient_dim - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(static_cast<std::size_t>(m));
  std::sort(pool.begin(), pool.end());
  return pool;
}

SubsetFamily build_subset_family(int ambient_dim, int m, const Rational& c, int count, Rng& rng) {
  if (m < 1 || ambient_dim < m || count < 0) throw DomainError("subset family arguments out of range");
  if (c <= 0 || c > 1) throw DomainError("overlap fraction c must lie in (0, 1]");
  if (Rational(ambient_dim) * c <= Rational(2 * m))
    throw HypothesisViolation("need M > 2m/c; got M = " + std::to_string(ambient_dim) + ", m = " +
                              std::to_string(m) + ", c = " + exactmath::to_string(c));
  Integer cap_num = c.get_num() * m;
  Integer cap;
  mpz_cdiv_q(cap.get_mpz_t(), cap_num.get_mpz_t(), c.get_den().get_mpz_t());

  SubsetFamily family;
  family.ambient_dim = ambient_dim;
  family.m = m;
  family.overlap_cap = static_cast<int>(cap.get_si());

  const std::size_t words = (static_cast<std::size_t>(ambient_dim) + 63) / 64;
  std::vector<std::vector<std::uint64_t>> masks;
  const long budget = 1000L * count;
  long attempts = 0;
  while (static_cast<int>(family.subsets.size()) < count) {
    if (attempts++ >= budget)
      throw ResourceError("subset family: accepted " + std::to_string(family.subsets.size()) + " of " +
                          std::to_string(count) + " after " + std::to_string(budget) + " draws");
    auto S = random_subset(ambient_dim, m, rng);
    std::vector<std::uint64_t> mask(words, 0);
    for (int i : S) mask[i / 64] |= std::uint64_t{1} << (i % 64);
    bool ok = true;
    for (const auto& other : masks) {
      int r = 0;
      for (std::size_t w = 0; w < words; ++w) r += std::popcount(mask[w] & other[w]);
      if (r >= family.overlap_cap) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    masks.push_back(std::move(mask));
    family.subsets.push_back(std::move(S));
  }
  return family;
}

SqBoundReport sq_bound_report(long family_size, const Rational& chi2_plus, const Rational& chi2_minus, int k,
                              const Rational& nu) {
  if (family_size < 1 || k < 0) throw DomainError("bound arguments out of range");
  if (chi2_plus < 0 || chi2_minus < 0) throw DomainError("chi-squared values must be nonnegative");
  SqBoundReport r;
  r.family_size = family_size;
  r.beta = chi2_plus + chi2_minus;
  r.gamma = Rational(k) * nu * nu + pow2(-k) * r.beta;
  r.gamma.canonicalize();
  r.tau = r.gamma;
  if (r.beta == 0) throw DomainError("beta = 0: the planted and null distributions coincide");
  r.query_lower_bound = Rational(family_size) * r.gamma / r.beta;
  r.query_lower_bound.canonicalize();
  r.oracle_tolerance = interval::sqrt(2 * r.gamma);
  return r;
}

}  // namespace massart::junta
