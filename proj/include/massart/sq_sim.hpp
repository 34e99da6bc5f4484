#pragma once

// STAT(tau) oracle over the hidden-junta testing problem, with baseline SQ
// distinguishers and a brute-force learner.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "massart/junta.hpp"

namespace massart::sq {

using junta::BitVector;
using junta::LabeledSample;
using junta::PlantedPair;

/// chi_T(x) * (value_a if y = a else value_b).
struct CharacterQuery {
  std::vector<int> T;
  Rational value_a{1};
  Rational value_b{-1};
};

/// table[sum_{i in R} x_i][0 for a, 1 for b].
struct StatisticQuery {
  std::vector<int> R;
  std::vector<std::array<Rational, 2>> table;
};

/// Arbitrary evaluator; expectations by enumeration (M <= 22) or sampling.
struct FunctionQuery {
  std::string name;
  std::function<Rational(std::span<const std::uint8_t>, bool is_a)> fn;
};

using QueryFn = std::variant<CharacterQuery, StatisticQuery, FunctionQuery>;

/// One-line JSON description used in transcripts.
std::string describe(const QueryFn& f);

/// f(x, y); throws ContractError when the value leaves [-1, 1].
Rational evaluate(const QueryFn& f, std::span<const std::uint8_t> x, bool is_a);

/// Exact E[f] under the planted pair.
Rational planted_expectation(const PlantedPair& pair, const QueryFn& f);
/// Exact E[f] under uniform x and an independent label (a with probability p).
Rational null_expectation(const Rational& p, int ambient_dim, const QueryFn& f);

enum class Mode { null, planted };
enum class Policy { toward_null, unbiased_random };
enum class EngineKind { exact, sampling };

struct Engine {
  EngineKind kind = EngineKind::exact;
  long samples = 0;               // sampling engine
  double failure_probability = 1e-9;  // Hoeffding confidence
};

struct LogEntry {
  long index = 0;
  std::string query;
  Rational answer;
};

class OracleSession {
 public:
  /// Members must share M, m, labels and prior. In planted mode the hidden
  /// index is drawn uniformly with `seed`.
  OracleSession(std::vector<PlantedPair> family, Mode mode, Rational tau, Policy policy, Engine engine,
                std::uint64_t seed);

  Rational ask(const QueryFn& f);

  long query_count() const noexcept { return static_cast<long>(log_.size()); }
  const std::vector<LogEntry>& log() const noexcept { return log_; }
  /// JSON lines, one record per query.
  std::string transcript() const;

  Mode mode() const noexcept { return mode_; }
  const Rational& tau() const noexcept { return tau_; }
  /// tau plus the sampling deviation bound when the sampling engine is active.
  Rational tolerance() const;
  const Rational& prior() const noexcept { return family_.front().prior; }
  const junta::Labels& labels() const noexcept { return family_.front().labels; }
  int ambient_dim() const noexcept { return family_.front().plus.ambient_dim(); }
  std::size_t family_size() const noexcept { return family_.size(); }

 private:
  friend struct SessionUnseal;
  Rational hidden_expectation(const QueryFn& f);
  Rational null_value(const QueryFn& f);

  std::vector<PlantedPair> family_;
  Mode mode_;
  Rational tau_;
  Policy policy_;
  Engine engine_;
  Rng rng_;
  std::optional<std::size_t> hidden_;
  Rational sampling_bound_;
  std::vector<LogEntry> log_;
};

/// Test-only access to the concealed state.
struct SessionUnseal {
  static std::optional<std::size_t> hidden_index(const OracleSession& s) { return s.hidden_; }
  static Rational hidden_truth(const OracleSession& s, const QueryFn& f);
};

enum class LossKind { zero_one, squared };

/// h(x) = values[sum_{i in R} x_i].
struct StatisticHypothesis {
  std::vector<int> R;
  std::vector<Rational> values;
};

struct LossEstimate {
  Rational value;
  Rational scale;      // the query answer was mapped back through this factor
  Rational tolerance;  // scale * session tolerance
};

LossEstimate estimate_loss(OracleSession& session, const StatisticHypothesis& h, LossKind kind);

/// Exact loss of h under the planted pair.
Rational planted_loss(const PlantedPair& pair, const StatisticHypothesis& h, LossKind kind);

/// Smallest loss any hypothesis attains under the null: min(p, 1-p) for
/// zero-one, p (1-p) (a-b)^2 for squared.
Rational null_loss_floor(const Rational& p, const junta::Labels& labels, LossKind kind);

enum class Verdict { null, planted, undecided };
std::string to_string(Verdict v);

struct ReductionResult {
  LossEstimate estimate;
  Rational floor;
  Verdict verdict = Verdict::undecided;  // planted iff estimate < floor - tolerance, else null
};

ReductionResult threshold_reduction(OracleSession& session, const StatisticHypothesis& h, LossKind kind);

struct ParityResult {
  Verdict verdict = Verdict::undecided;
  long queries = 0;
  std::vector<int> witness;  // first deviating T
};

/// Scans chi_T(x) * (+1 for a, -1 for b) for |T| = 1..degree_budget, colex
/// order within each size, and declares planted when an answer deviates from
/// the null value by more than 2 * tolerance.
ParityResult parity_distinguisher(OracleSession& session, int degree_budget, long query_budget);

struct FamilyPowerStats {
  std::vector<Rational> squared_deviations;
  Rational mean;
  Rational max;
  std::size_t argmax = 0;
  Rational beta;   // max self-correlation
  Rational gamma;  // max |pairwise correlation|
  Rational gram_bound;        // (beta + (s-1) gamma) / s
  Rational gershgorin_bound;  // max_i sum_j |G_ij| / s
};

FamilyPowerStats family_power_audit(const std::vector<PlantedPair>& family, const QueryFn& f);

struct RecoveryResult {
  std::vector<std::vector<int>> argmax;  // at most kMaxReported subsets, in enumeration order
  long argmax_count = 0;
  bool tie = false;
  bool finite = false;  // some subset has positive likelihood
  double log_likelihood = 0;
  long subsets = 0;

  static constexpr std::size_t kMaxReported = 64;
};

/// Maximum-likelihood S over all size-m subsets of [M], given the public
/// D+-, D- and p of `model` (its S is ignored). Threads are capped by
/// MASSART_FORGE_THREADS.
RecoveryResult brute_force_recover(const std::vector<LabeledSample>& samples, const PlantedPair& model);

/// Thread count from MASSART_FORGE_THREADS (default: hardware concurrency).
unsigned worker_threads();

}  // namespace massart::sq
