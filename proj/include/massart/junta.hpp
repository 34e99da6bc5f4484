#pragma once

// Hidden-junta distributions on the hypercube, the planted testing problem,
// their pairwise correlations, near-orthogonal subset families and the generic
// SQ bound.

#include <cstdint>
#include <span>
#include <vector>

#include "massart/exactmath.hpp"
#include "massart/interval.hpp"
#include "massart/rng.hpp"

namespace massart::junta {

using exactmath::UnivariateMeasure;
using BitVector = std::vector<std::uint8_t>;

/// p^A_S on {0,1}^M: uniform off S, symmetric on S with sum distributed as A.
class JuntaSpec {
 public:
  JuntaSpec(int ambient_dim, std::vector<int> S, UnivariateMeasure A);

  int ambient_dim() const noexcept { return ambient_dim_; }
  const std::vector<int>& S() const noexcept { return S_; }
  const UnivariateMeasure& A() const noexcept { return A_; }
  int m() const noexcept { return A_.m(); }

  /// sum_{i in S} x_i.
  int statistic(std::span<const std::uint8_t> x) const;

  friend bool operator==(const JuntaSpec&, const JuntaSpec&) = default;

 private:
  int ambient_dim_;
  std::vector<int> S_;
  UnivariateMeasure A_;
};

struct Labels {
  Rational a;
  Rational b;
  friend bool operator==(const Labels&, const Labels&) = default;
};

/// With probability p a sample of (p^{plus}_S, a), otherwise (p^{minus}_S, b).
struct PlantedPair {
  JuntaSpec plus;
  JuntaSpec minus;
  Labels labels;
  Rational prior;

  PlantedPair(JuntaSpec plus, JuntaSpec minus, Labels labels, Rational prior);
  friend bool operator==(const PlantedPair&, const PlantedPair&) = default;
};

/// Pair built from unnormalized D+ and D- with p = |D+| / (|D+| + |D-|).
PlantedPair standard_pair(int ambient_dim, const std::vector<int>& S, const UnivariateMeasure& dplus,
                          const UnivariateMeasure& dminus, const Labels& labels);

struct LabeledSample {
  BitVector x;
  bool is_a = false;  // label is a (else b)
};

Rational junta_pmf(const JuntaSpec& spec, std::span<const std::uint8_t> x);

/// Dense pmf (M <= 22).
exactmath::CubePmf junta_cube_pmf(const JuntaSpec& spec);

/// Reusable sampler for one spec.
class JuntaSampler {
 public:
  explicit JuntaSampler(const JuntaSpec& spec);
  BitVector draw(Rng& rng) const;

 private:
  const JuntaSpec* spec_;
  DiscreteSampler weight_;
};

BitVector junta_sample(const JuntaSpec& spec, Rng& rng);

class PlantedSampler {
 public:
  explicit PlantedSampler(const PlantedPair& pair);
  LabeledSample draw(Rng& rng) const;

 private:
  JuntaSampler plus_;
  JuntaSampler minus_;
  std::uint64_t prior_threshold_;
};

LabeledSample planted_sample(const PlantedPair& pair, Rng& rng);

/// Uniform x, label a with probability p independently.
LabeledSample null_sample(const Rational& p, int ambient_dim, Rng& rng);

/// hat A_j = E_A[K_j(X; m)] / C(m, j) for j = 0..jmax, A normalized.
std::vector<Rational> fourier_levels(const UnivariateMeasure& a, int jmax);

/// sum_{j=1}^{r} C(r, j) a_j b_j from precomputed levels.
Rational correlation_from_levels(int r, const std::vector<Rational>& a, const std::vector<Rational>& b);

/// chi_{U_M}(p^A_S, p^B_S') through the Fourier reduction.
Rational pairwise_correlation(const JuntaSpec& a, const JuntaSpec& b);

/// Same quantity by enumerating {0,1}^M (M <= 16).
Rational pairwise_correlation_bruteforce(const JuntaSpec& a, const JuntaSpec& b);

/// chi_{U^p}(P, Q) = p chi(plus, plus') + (1 - p) chi(minus, minus').
Rational planted_correlation(const PlantedPair& P, const PlantedPair& Q);

/// Same quantity by enumerating {0,1}^M x {a, b} (M <= 12).
Rational planted_correlation_bruteforce(const PlantedPair& P, const PlantedPair& Q);

/// (r/m)^{k+1} chi2 + k nu^2.
Rational correlation_bound(int r, int m, int k, const Rational& chi2, const Rational& nu);

int overlap(const std::vector<int>& S, const std::vector<int>& T);

struct SubsetFamily {
  int ambient_dim = 0;
  int m = 0;
  int overlap_cap = 0;  // every distinct pair overlaps in < overlap_cap
  std::vector<std::vector<int>> subsets;
};

/// Rejection-samples `count` size-m subsets of [M] with pairwise overlap
/// < ceil(c m). Requires M > 2m/c; gives up after 1000 * count draws.
SubsetFamily build_subset_family(int ambient_dim, int m, const Rational& c, int count, Rng& rng);

/// Uniform size-m subset of [M], ascending.
std::vector<int> random_subset(int ambient_dim, int m, Rng& rng);

struct SqBoundReport {
  Rational gamma;
  Rational beta;
  Rational tau;
  long family_size = 0;
  Rational query_lower_bound;  // s gamma / beta
  Interval oracle_tolerance;   // sqrt(2 gamma)
};

SqBoundReport sq_bound_report(long family_size, const Rational& chi2_plus, const Rational& chi2_minus, int k,
                              const Rational& nu);

}  // namespace massart::junta
