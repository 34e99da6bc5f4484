#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "massart/errors.hpp"
#include "massart/instances.hpp"
#include "massart/sq_sim.hpp"

using namespace massart;
using namespace massart::sq;
using exactmath::frac;

namespace {

struct Fixture {
  instances::InstanceBundle bundle;
  std::vector<PlantedPair> family;
};

Fixture make_fixture(instances::Kind kind, int m, int s, int k, int ambient, int count, std::uint64_t seed) {
  univariate::UnivariateParams p;
  p.m = m;
  p.s = s;
  p.d = 1;
  p.k = k;
  instances::ActivationSpec act;
  act.kind = kind == instances::Kind::ltf    ? instances::ActivationKind::sign
             : kind == instances::Kind::relu ? instances::ActivationKind::relu_hat
                                             : instances::ActivationKind::rational_decay;
  Fixture f{instances::assemble_instance(kind, p, ambient, act, seed, instances::AssemblyMode::desk), {}};
  f.family.push_back(f.bundle.pair());
  Rng rng(seed + 1);
  const auto subsets = junta::build_subset_family(ambient, m, frac(3, 4), count - 1, rng);
  for (const auto& S : subsets.subsets)
    f.family.push_back(junta::standard_pair(ambient, S, f.bundle.dplus, f.bundle.dminus, f.bundle.labels));
  return f;
}

StatisticHypothesis target_hypothesis(const instances::InstanceBundle& b, const std::vector<int>& S) {
  StatisticHypothesis h{S, {}};
  for (int t = 0; t <= b.params.m; ++t) h.values.push_back(instances::eval_target_statistic(b, t));
  return h;
}

}  // namespace

TEST_CASE("query evaluation and expectations") {
  const auto f = make_fixture(instances::Kind::ltf, 4, 3, 1, 12, 1, 3);
  const auto& pair = f.family.front();
  const QueryFn constant = StatisticQuery{{}, {{Rational(1, 2), Rational(1, 2)}}};
  CHECK(planted_expectation(pair, constant) == frac(1, 2));
  CHECK(null_expectation(pair.prior, 12, constant) == frac(1, 2));
  const QueryFn label = CharacterQuery{{}, 1, -1};
  CHECK(planted_expectation(pair, label) == 2 * pair.prior - 1);
  CHECK(null_expectation(pair.prior, 12, label) == 2 * pair.prior - 1);
  const QueryFn off = CharacterQuery{{pair.plus.S().front()}, 1, -1};
  CHECK(null_expectation(pair.prior, 12, off) == 0);
  const QueryFn fn = FunctionQuery{"first-bit", [](std::span<const std::uint8_t> x, bool) {
                                     return Rational(x[0]);
                                   }};
  CHECK(null_expectation(pair.prior, 12, fn) == frac(1, 2));
  const QueryFn bad = FunctionQuery{"too-big", [](std::span<const std::uint8_t>, bool) { return Rational(2); }};
  CHECK_THROWS_AS(evaluate(bad, junta::BitVector(12, 0), true), ContractError);
  CHECK(describe(off).find("character") != std::string::npos);
}

TEST_CASE("session contracts and policy") {
  const auto f = make_fixture(instances::Kind::ltf, 8, 3, 2, 24, 10, 5);
  CHECK_THROWS_AS(OracleSession(f.family, Mode::planted, -1, Policy::toward_null, Engine{}, 1), ContractError);
  CHECK_THROWS_AS(OracleSession({}, Mode::planted, 0, Policy::toward_null, Engine{}, 1), ContractError);

  OracleSession a(f.family, Mode::planted, frac(1, 100), Policy::toward_null, Engine{}, 99);
  OracleSession b(f.family, Mode::planted, frac(1, 100), Policy::toward_null, Engine{}, 99);
  CHECK(SessionUnseal::hidden_index(a) == SessionUnseal::hidden_index(b));
  REQUIRE(SessionUnseal::hidden_index(a).has_value());
  const auto& hidden = f.family[*SessionUnseal::hidden_index(a)];
  const Rational p = a.prior();

  // The label character never deviates; degree-3 characters inside the
  // planted set exceed the moment-matching degree.
  const QueryFn label = CharacterQuery{{}, 1, -1};
  CHECK(a.ask(label) == null_expectation(p, 24, label));
  bool saw_far = false;
  const auto& S = hidden.plus.S();
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      for (std::size_t l = j + 1; l < S.size(); ++l) {
        const QueryFn q = CharacterQuery{{S[i], S[j], S[l]}, 1, -1};
        const Rational truth = SessionUnseal::hidden_truth(a, q);
        const Rational null = null_expectation(p, 24, q);
        const Rational ans = a.ask(q);
        if (abs(truth - null) <= a.tau()) {
          CHECK(ans == null);
        } else {
          saw_far = true;
          CHECK(abs(ans - truth) == a.tau());
        }
      }
    }
  }
  CHECK(saw_far);
  CHECK(a.query_count() == 57);

  OracleSession c(f.family, Mode::null, frac(1, 10), Policy::toward_null, Engine{}, 1);
  for (int i = 0; i < 5; ++i) c.ask(label);
  CHECK(c.query_count() == 5);
  CHECK(c.log().back().index == 4);
  CHECK(c.transcript().find("\"answer\"") != std::string::npos);
  CHECK_FALSE(SessionUnseal::hidden_index(c).has_value());
}

TEST_CASE("unbiased policy and sampling engine stay within tolerance") {
  const auto f = make_fixture(instances::Kind::ltf, 8, 3, 2, 24, 5, 6);
  OracleSession s(f.family, Mode::planted, frac(1, 20), Policy::unbiased_random, Engine{}, 4);
  const QueryFn q = CharacterQuery{{f.family[0].plus.S()[0], f.family[0].plus.S()[1]}, 1, -1};
  for (int i = 0; i < 20; ++i) CHECK(abs(s.ask(q) - SessionUnseal::hidden_truth(s, q)) <= s.tau());

  Engine sampling;
  sampling.kind = EngineKind::sampling;
  sampling.samples = 20000;
  OracleSession t(f.family, Mode::planted, 0, Policy::toward_null, sampling, 4);
  CHECK(t.tolerance() > 0);
  CHECK(abs(t.ask(q) - SessionUnseal::hidden_truth(t, q)) <= t.tolerance());
}

TEST_CASE("null floors") {
  const junta::Labels pm{1, -1};
  CHECK(null_loss_floor(frac(1, 4), pm, LossKind::zero_one) == frac(1, 4));
  CHECK(null_loss_floor(frac(3, 4), pm, LossKind::zero_one) == frac(1, 4));
  CHECK(null_loss_floor(frac(1, 4), pm, LossKind::squared) == frac(3, 4));
  CHECK(null_loss_floor(frac(1, 3), junta::Labels{-1, frac(1, 2)}, LossKind::squared) == frac(1, 2));
}

TEST_CASE("threshold reductions on desk instances") {
  for (auto kind : {instances::Kind::ltf, instances::Kind::relu, instances::Kind::l2}) {
    INFO(instances::to_string(kind));
    const auto f = make_fixture(kind, 8, 3, 2, 24, 1, 21);
    const LossKind loss = kind == instances::Kind::ltf ? LossKind::zero_one : LossKind::squared;
    const auto h = target_hypothesis(f.bundle, f.bundle.S);
    const Rational exact = planted_loss(f.family[0], h, loss);
    if (loss == LossKind::zero_one) CHECK(exact == f.bundle.audit.opt_zero_one);
    else CHECK(exact == f.bundle.audit.opt_squared);

    OracleSession planted(f.family, Mode::planted, 0, Policy::toward_null, Engine{}, 2);
    const auto r = threshold_reduction(planted, h, loss);
    CHECK(r.estimate.value == exact);
    CHECK(r.verdict == Verdict::planted);

    OracleSession null(f.family, Mode::null, frac(1, 1000), Policy::toward_null, Engine{}, 2);
    const auto rn = threshold_reduction(null, h, loss);
    CHECK(rn.verdict == Verdict::null);
    CHECK(rn.estimate.value >= rn.floor - rn.estimate.tolerance);
  }
}

TEST_CASE("parity distinguisher") {
  const auto f = make_fixture(instances::Kind::ltf, 4, 3, 1, 12, 4, 8);
  OracleSession exact(f.family, Mode::planted, 0, Policy::toward_null, Engine{}, 3);
  const auto r = parity_distinguisher(exact, 4, 10000);
  CHECK(r.verdict == Verdict::planted);
  const auto& S = f.family[*SessionUnseal::hidden_index(exact)].plus.S();
  for (int i : r.witness) CHECK(std::find(S.begin(), S.end(), i) != S.end());

  OracleSession null(f.family, Mode::null, 0, Policy::toward_null, Engine{}, 3);
  CHECK(parity_distinguisher(null, 3, 10000).verdict != Verdict::planted);
  OracleSession capped(f.family, Mode::null, 0, Policy::toward_null, Engine{}, 3);
  const auto rc = parity_distinguisher(capped, 4, 7);
  CHECK(rc.verdict == Verdict::undecided);
  CHECK(rc.queries == 7);
}

TEST_CASE("family power audit") {
  const auto f = make_fixture(instances::Kind::ltf, 8, 3, 2, 24, 30, 12);
  const QueryFn constant = StatisticQuery{{}, {{Rational(1, 3), Rational(1, 3)}}};
  const auto zero = family_power_audit(f.family, constant);
  for (const auto& d : zero.squared_deviations) CHECK(d == 0);
  const auto& S0 = f.family[0].plus.S();
  const QueryFn chi = CharacterQuery{{S0[0], S0[1]}, 1, -1};
  const auto stats = family_power_audit(f.family, chi);
  CHECK(stats.mean <= stats.gram_bound);
  CHECK(stats.mean <= stats.gershgorin_bound);
  CHECK(stats.squared_deviations[stats.argmax] == stats.max);
  const QueryFn table = StatisticQuery{S0, std::vector<std::array<Rational, 2>>(9, {Rational(1), Rational(-1)})};
  const auto on_S = family_power_audit(f.family, QueryFn(CharacterQuery{S0, 1, -1}));
  CHECK(on_S.argmax == 0);
  CHECK(family_power_audit(f.family, table).max == 0);
}

TEST_CASE("brute force recovery") {
  const auto f = make_fixture(instances::Kind::ltf, 4, 3, 1, 12, 1, 30);
  const auto& pair = f.family.front();
  Rng rng(17);
  const junta::PlantedSampler sampler(pair);
  std::vector<LabeledSample> samples;
  for (int i = 0; i < 100000; ++i) samples.push_back(sampler.draw(rng));
  const auto r = brute_force_recover(samples, pair);
  CHECK(r.subsets == 495);
  CHECK_FALSE(r.tie);
  REQUIRE(r.argmax.size() == 1);
  CHECK(r.argmax[0] == pair.plus.S());

  std::vector<LabeledSample> null;
  for (int i = 0; i < 2000; ++i) null.push_back(junta::null_sample(pair.prior, 12, rng));
  const auto rn = brute_force_recover(null, pair);
  CHECK(rn.argmax_count >= 1);

  std::vector<LabeledSample> few(samples.begin(), samples.begin() + 10);
  const auto rf = brute_force_recover(few, pair);
  CHECK(rf.argmax_count >= 1);
}
