// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "massart/cli.hpp"
#include "massart/errors.hpp"
#include "massart/instances.hpp"
#include "massart/sq_sim.hpp"
#include "massart/univariate.hpp"

using namespace massart;
using exactmath::frac;
using exactmath::UnivariateMeasure;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failed conditions; the first few are reported.
class Checker {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failed_;
    if (failed_ <= 3) notes_ << (failed_ > 1 ? "; " : "") << what;
  }
  Outcome done(const std::string& summary) const {
    if (failed_ == 0) return {true, summary};
    return {false, std::to_string(failed_) + " failed: " + notes_.str()};
  }

 private:
  int failed_ = 0;
  std::ostringstream notes_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

univariate::UnivariateParams params(int m, int s, int d, int k) {
  univariate::UnivariateParams p;
  p.m = m;
  p.s = s;
  p.d = d;
  p.k = k;
  return p;
}

instances::ActivationSpec activation_for(instances::Kind kind) {
  instances::ActivationSpec a;
  a.kind = kind == instances::Kind::ltf    ? instances::ActivationKind::sign
           : kind == instances::Kind::relu ? instances::ActivationKind::relu_hat
                                           : instances::ActivationKind::rational_decay;
  return a;
}

instances::InstanceBundle desk_bundle(instances::Kind kind, int m, int ambient, std::uint64_t seed) {
  return instances::assemble_instance(kind, params(m, 3, 1, 2), ambient, activation_for(kind), seed,
                                      instances::AssemblyMode::desk);
}

std::string dec(const Rational& r, int digits = 6) { return exactmath::to_decimal(r, digits); }

junta::BitVector random_bits(int n, Rng& rng) {
  junta::BitVector x(static_cast<std::size_t>(n));
  for (auto& b : x) b = static_cast<std::uint8_t>(rng.below(2));
  return x;
}

UnivariateMeasure random_measure(int m, Rng& rng) {
  std::vector<Rational> w(static_cast<std::size_t>(m) + 1);
  for (auto& v : w) v = Rational(static_cast<long>(rng.below(10)));
  if (std::all_of(w.begin(), w.end(), [](const Rational& v) { return v == 0; })) w[0] = 1;
  return UnivariateMeasure(m, w).normalized();
}

// ---------------------------------------------------------------------------

Outcome mu_feasibility() {
  Checker c;
  int built = 0, certified = 0;
  double slowest = 0;
  for (int s : {7, 9, 15, 31}) {
    for (int k : {1, 2, 4}) {
      const bool required = s >= 10 * k * k * k * k;
      const auto t0 = std::chrono::steady_clock::now();
      const std::string tag = "s=" + std::to_string(s) + ",k=" + std::to_string(k);
      try {
        const auto mu = univariate::build_mu(s, k);
        bool moments = mu.at(0) == -1;
        for (int t = 0; t <= k; ++t) moments = moments && mu.moment(t) == 0;
        c.expect(moments, tag + " moments");
        c.expect(mu.max_off_center() < frac(1, 10), tag + " sup");
        ++built;
      } catch (const univariate::InfeasibleCorrection& e) {
        c.expect(!required, tag + " required but infeasible");
        c.expect(e.certificate().certifies(), tag + " certificate");
        ++certified;
      }
      const double dt = seconds_since(t0);
      slowest = std::max(slowest, dt);
      c.expect(dt < 1.0, tag + " slower than 1 s");
    }
  }
  for (int k : {0, 1, 2}) {
    try {
      univariate::build_mu(6, k);
      c.expect(false, "s=6 built");
    } catch (const univariate::InfeasibleCorrection& e) {
      c.expect(e.certificate().certifies(), "s=6 certificate");
    }
  }
  std::ostringstream o;
  o << built << " built, " << certified << " certified infeasible (all with s < 10k^4), s=6 infeasible; slowest "
    << std::setprecision(3) << slowest << " s";
  return c.done(o.str());
}

Outcome moment_matching() {
  Checker c;
  Rational residual[2];
  int idx = 0;
  for (int m : {2000, 4000}) {
    const auto p = params(m, 7, 3, 1);
    const auto J = univariate::build_forbidden_set(m, 7, 3);
    const auto dplus = univariate::build_dplus(m, J, univariate::build_mu(7, 1)).normalized();
    const auto dminus = univariate::build_dminus(m, 7).normalized();
    for (int t = 1; t <= p.k; ++t) c.expect(exactmath::measure_moment(dplus, t) == 0, "D+ moment nonzero");
    residual[idx] = univariate::max_normalized_moment(dminus, p.k);
    const Interval bound = univariate::dminus_moment_bound(m, 7, p.k);
    c.expect(residual[idx] <= bound.lo, "D- residual above bound at m=" + std::to_string(m));
    ++idx;
  }
  c.expect(residual[1] * 10 <= residual[0], "residual did not shrink 10x");
  const Rational ratio = residual[0] / residual[1];
  std::ostringstream o;
  o << "nu(D+)=0; nu(D-) at m=2000 ~ " << residual[0].get_d() << " <= bound ~ "
    << univariate::dminus_moment_bound(2000, 7, 1).lo.get_d() << "; shrink factor ~ " << ratio.get_d();
  return c.done(o.str());
}

Outcome prop32_grid() {
  Checker c;
  std::ostringstream o;
  for (auto [m, s, d, k] : {std::array{2000, 7, 3, 1}, std::array{4000, 7, 3, 1}, std::array{4000, 7, 4, 1}}) {
    const auto p = params(m, s, d, k);
    const auto J = univariate::build_forbidden_set(m, s, d);
    const auto dplus = univariate::build_dplus(m, J, univariate::build_mu(s, k));
    const auto dminus = univariate::build_dminus(m, s);
    const auto r = univariate::audit_prop32(dplus, dminus, J, p);
    const std::string tag = "(" + std::to_string(m) + "," + std::to_string(s) + "," + std::to_string(d) + "," +
                            std::to_string(k) + ")";
    c.expect(univariate::validate_params(p).ok(), tag + " params");
    c.expect(r.all_pass(), tag + " audit");
    c.expect(r.dplus_zero_on_J, tag + " 1a");
    c.expect(r.dplus_ratio_min > 2 && r.dplus_ratio_max < 4, tag + " band");
    c.expect(r.norm_dplus == 3, tag + " mass 3");
    c.expect(r.norm_dminus >= frac(1, 2 * s) && r.norm_dminus <= frac(2, s), tag + " |D-|");
    c.expect(r.dminus_mass_outside_J <= r.zeta.lo, tag + " zeta");
    for (int x = 0; x <= m; ++x)
      if (!J.contains(x)) c.expect(dplus[x] > 2 * dminus[x], tag + " D+ > 2D-");
    o << tag << " D+/Bin in [" << dec(r.dplus_ratio_min, 3) << "," << dec(r.dplus_ratio_max, 3) << "] ";
  }
  return c.done(o.str() + "all properties hold");
}

Rational naive_fourier_chi(const exactmath::CubePmf& p, const exactmath::CubePmf& q) {
  const std::uint64_t n = p.values().size();
  Rational total = -1;
  for (std::uint64_t T = 0; T < n; ++T) {
    Rational hp = 0, hq = 0;
    for (std::uint64_t x = 0; x < n; ++x) {
      const bool odd = std::popcount(x & T) % 2;
      hp += odd ? -p(x) : p(x);
      hq += odd ? -q(x) : q(x);
    }
    total += hp * hq;
  }
  return total;
}

Outcome correlation_oracles() {
  Checker c;
  Rng rng(2718);
  for (int trial = 0; trial < 100; ++trial) {
    const int dim = 1 + static_cast<int>(rng.below(6));
    auto draw = [&] {
      std::vector<Rational> v(std::size_t{1} << dim);
      Rational total = 0;
      for (auto& w : v) total += (w = Rational(static_cast<long>(rng.below(20))));
      if (total == 0) total = v[0] = 1;
      for (auto& w : v) w /= total;
      return exactmath::CubePmf(dim, v);
    };
    const auto p = draw(), q = draw();
    const Rational direct = exactmath::chi_inner_product(p, q, exactmath::CubePmf::uniform(dim));
    c.expect(direct == naive_fourier_chi(p, q), "Fourier identity");
    c.expect(direct == exactmath::chi_uniform_fourier(p, q), "butterfly identity");
  }

  int specs = 0;
  for (int M = 1; M <= 12; ++M) {
    for (int m = 1; m <= std::min(6, M); ++m) {
      for (int rep = 0; rep < 3; ++rep) {
        const junta::JuntaSpec a(M, junta::random_subset(M, m, rng), random_measure(m, rng));
        const junta::JuntaSpec b(M, junta::random_subset(M, m, rng), random_measure(m, rng));
        c.expect(junta::pairwise_correlation(a, b) == junta::pairwise_correlation_bruteforce(a, b),
                 "fast vs brute force M=" + std::to_string(M));
        ++specs;
      }
    }
  }

  const auto bundle = desk_bundle(instances::Kind::ltf, 8, 24, 41);
  const auto bin = UnivariateMeasure::binomial(8);
  const auto dp = bundle.dplus.normalized(), dm = bundle.dminus.normalized();
  const Rational chi2p = exactmath::chi_squared_div(dp, bin), chi2m = exactmath::chi_squared_div(dm, bin);
  const Rational nup = univariate::max_normalized_moment(dp, 2), num = univariate::max_normalized_moment(dm, 2);
  Rng frng(42);
  const auto family = junta::build_subset_family(24, 8, frac(3, 4), 64, frng);
  long pairs = 0;
  for (std::size_t i = 0; i < family.subsets.size(); ++i) {
    for (std::size_t j = i + 1; j < family.subsets.size(); ++j) {
      const auto& S = family.subsets[i];
      const auto& T = family.subsets[j];
      const int r = junta::overlap(S, T);
      const Rational cp = junta::pairwise_correlation(junta::JuntaSpec(24, S, dp), junta::JuntaSpec(24, T, dp));
      const Rational cm = junta::pairwise_correlation(junta::JuntaSpec(24, S, dm), junta::JuntaSpec(24, T, dm));
      c.expect(abs(cp) <= junta::correlation_bound(r, 8, 2, chi2p, nup), "bound D+");
      c.expect(abs(cm) <= junta::correlation_bound(r, 8, 2, chi2m, num), "bound D-");
      ++pairs;
    }
  }
  return c.done("100 Fourier pairs exact; " + std::to_string(specs) + " junta specs fast == brute force; " +
                std::to_string(pairs) + " family pairs within the overlap bound");
}

Outcome massart_audits() {
  Checker c;
  std::ostringstream o;
  auto check_bundle = [&](const instances::InstanceBundle& b, const std::string& tag) {
    const auto& a = b.audit;
    c.expect(a.all_pass(), tag + " audit");
    c.expect(a.noise_rate_on_J == 0, tag + " noise on J");
    for (const auto& row : a.rows)
      if (row.in_J) c.expect(row.noise == 0, tag + " row noise on J");
    if (b.kind == instances::Kind::l2) {
      c.expect(a.l2_budget == frac(32, 9), tag + " budget");
      c.expect(a.max_noise_rate_off_J <= a.l2_budget, tag + " l2 error");
      o << tag << " max off-J sq error " << dec(a.max_noise_rate_off_J, 4) << " <= 32/9; ";
      return;
    }
    c.expect(a.max_noise_rate_off_J <= frac(1, 3), tag + " noise off J");
    const Rational opt = (1 - b.prior) * a.dminus_mass_off_J;
    c.expect(a.opt_zero_one == opt, tag + " opt formula");
    if (b.kind == instances::Kind::ltf) {
      c.expect(a.opt_zero_one <= a.zeta.lo, tag + " opt <= zeta");
    } else {
      c.expect(a.opt_squared == 4 * opt, tag + " squared opt");
      c.expect(a.opt_squared <= 4 * a.zeta.lo, tag + " opt <= 4 zeta");
    }
    o << tag << " eta_max " << dec(a.max_noise_rate_off_J, 4) << " opt " << dec(a.opt_zero_one, 4) << "; ";
  };
  for (auto kind : {instances::Kind::ltf, instances::Kind::relu, instances::Kind::l2}) {
    check_bundle(desk_bundle(kind, 8, 24, 5), instances::to_string(kind) + "/desk");
    check_bundle(instances::assemble_instance(kind, params(2000, 7, 3, 1), 4000, activation_for(kind), 5),
                 instances::to_string(kind) + "/strict");
  }
  return c.done(o.str());
}

Outcome weight_pipeline() {
  Checker c;
  const auto small = desk_bundle(instances::Kind::ltf, 5, 10, 9);
  const auto w = instances::ptf_to_ltf_weights(small);
  const auto u = instances::reduce_to_unit_weights(w);
  for (const auto& v : w.weights) c.expect(mpz_even_p(v.get_mpz_t()), "odd weight");
  for (std::uint64_t x = 0; x < 1024; ++x) {
    junta::BitVector bits(10);
    for (int i = 0; i < 10; ++i) bits[static_cast<std::size_t>(i)] = (x >> i) & 1;
    const auto v = instances::veronese_embed(bits, w.degree);
    const Rational g = instances::eval_target(small, bits);
    c.expect(w.eval(v) == g, "exhaustive LTF");
    c.expect(u.eval(v) == g, "exhaustive unit LTF");
  }
  const auto big = desk_bundle(instances::Kind::ltf, 8, 24, 10);
  const auto wb = instances::ptf_to_ltf_weights(big);
  const auto ub = instances::reduce_to_unit_weights(wb);
  Rng rng(99);
  for (int i = 0; i < 100000; ++i) {
    const auto bits = random_bits(24, rng);
    const auto v = instances::veronese_embed(bits, wb.degree);
    const Rational g = instances::eval_target(big, bits);
    c.expect(wb.eval(v) == g, "random LTF");
    c.expect(ub.eval(v) == g, "random unit LTF");
  }
  return c.done("1024/1024 exhaustive at m'=10 (W=" + w.max_abs.get_str() + ") and 10^5 random at m'=24 (W=" +
                wb.max_abs.get_str() + ", " + std::to_string(ub.sign.size()) + " unit coordinates) agree");
}

Outcome sq_game() {
  Checker c;
  const auto bundle = desk_bundle(instances::Kind::ltf, 8, 24, 77);
  Rng rng(1234);
  const auto subsets = junta::build_subset_family(24, 8, frac(3, 4), 100, rng);
  std::vector<junta::PlantedPair> family;
  for (const auto& S : subsets.subsets)
    family.push_back(junta::standard_pair(24, S, bundle.dplus, bundle.dminus, bundle.labels));

  const auto bin = UnivariateMeasure::binomial(8);
  const auto dp = bundle.dplus.normalized(), dm = bundle.dminus.normalized();
  const Rational nu = std::max(univariate::max_normalized_moment(dp, 2), univariate::max_normalized_moment(dm, 2));
  const auto report = junta::sq_bound_report(100, exactmath::chi_squared_div(dp, bin),
                                             exactmath::chi_squared_div(dm, bin), 2, nu);

  sq::OracleSession exact(family, sq::Mode::planted, 0, sq::Policy::toward_null, sq::Engine{}, 5);
  const auto r0 = sq::parity_distinguisher(exact, 4, 10000);
  c.expect(r0.verdict == sq::Verdict::planted, "tau = 0 not planted");

  const Rational tau = report.oracle_tolerance.lo;
  sq::OracleSession hidden(family, sq::Mode::planted, tau, sq::Policy::toward_null, sq::Engine{}, 5);
  const auto r1 = sq::parity_distinguisher(hidden, 4, 10000);
  c.expect(r1.verdict == sq::Verdict::undecided, "tau = bound not undecided");
  c.expect(r1.queries == 10000, "query budget not exhausted");
  sq::OracleSession null(family, sq::Mode::null, tau, sq::Policy::toward_null, sq::Engine{}, 5);
  sq::parity_distinguisher(null, 4, 10000);
  c.expect(hidden.transcript() == null.transcript(), "transcript differs from null replay");

  const auto& truth = family[*sq::SessionUnseal::hidden_index(hidden)];
  const junta::PlantedSampler sampler(truth);
  Rng srng(31337);
  std::vector<junta::LabeledSample> samples;
  samples.reserve(100000);
  for (int i = 0; i < 100000; ++i) samples.push_back(sampler.draw(srng));
  const auto rec = sq::brute_force_recover(samples, truth);
  c.expect(!rec.tie && rec.argmax.size() == 1 && rec.argmax[0] == truth.plus.S(), "recovery");

  std::ostringstream o;
  o << "tau=0: planted after " << r0.queries << " queries; tau=sqrt(2 gamma)~" << tau.get_d() << ": "
    << sq::to_string(r1.verdict) << " after " << r1.queries
    << " queries, transcript == null replay; lower bound s*gamma/beta ~ " << report.query_lower_bound.get_d()
    << "; recovered S among " << rec.subsets << " subsets";
  return c.done(o.str());
}

Outcome threshold_reductions() {
  Checker c;
  const Interval tol = interval::sqrt(2 * frac(1, 1000000));
  const Rational session_tau = tol.hi;
  std::ostringstream o;
  for (auto kind : {instances::Kind::ltf, instances::Kind::relu, instances::Kind::l2}) {
    const std::string tag = instances::to_string(kind);
    const auto b = desk_bundle(kind, 8, 24, 13);
    const std::vector<junta::PlantedPair> family{b.pair()};
    const auto loss = kind == instances::Kind::ltf ? sq::LossKind::zero_one : sq::LossKind::squared;
    const Rational p = b.prior;
    const Rational floor = sq::null_loss_floor(p, b.labels, loss);
    if (kind == instances::Kind::ltf) c.expect(floor == std::min(p, Rational(1 - p)), tag + " floor");
    else if (kind == instances::Kind::relu) c.expect(floor == 4 * p - 4 * p * p, tag + " floor");
    else c.expect(floor == p * (1 - p) * (b.labels.a - b.labels.b) * (b.labels.a - b.labels.b), tag + " floor");

    sq::StatisticHypothesis target{b.S, {}};
    for (int t = 0; t <= b.params.m; ++t) target.values.push_back(instances::eval_target_statistic(b, t));
    sq::OracleSession planted(family, sq::Mode::planted, session_tau, sq::Policy::toward_null, sq::Engine{}, 1);
    const auto r = sq::threshold_reduction(planted, target, loss);
    c.expect(floor - r.estimate.value > 2 * r.estimate.tolerance, tag + " planted margin");
    c.expect(r.verdict == sq::Verdict::planted, tag + " planted verdict");

    Rng rng(500 + static_cast<int>(kind));
    int probes = 0;
    for (int trial = 0; trial < 200; ++trial) {
      sq::OracleSession null(family, sq::Mode::null, session_tau, sq::Policy::toward_null, sq::Engine{}, 1);
      sq::StatisticHypothesis h = target;
      if (trial > 0) {
        h.R = junta::random_subset(24, 1 + static_cast<int>(rng.below(8)), rng);
        h.values.assign(h.R.size() + 1, 0);
        for (auto& v : h.values) {
          if (loss == sq::LossKind::zero_one) v = rng.below(2) ? b.labels.a : b.labels.b;
          else v = frac(static_cast<long>(rng.below(9)) - 4, 4);
        }
      }
      const auto rn = sq::threshold_reduction(null, h, loss);
      c.expect(rn.verdict != sq::Verdict::planted, tag + " null probe declared planted");
      c.expect(rn.estimate.value >= rn.floor - rn.estimate.tolerance, tag + " null probe below floor");
      ++probes;
    }
    o << tag << ": loss " << dec(r.estimate.value, 4) << " vs floor " << dec(floor, 4) << ", " << probes
      << " null probes above floor; ";
  }
  return c.done(o.str());
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "massart-forge");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_roundtrip() {
  Checker c;
  const fs::path dir = fs::temp_directory_path() / ("massart-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  using Json = nlohmann::ordered_json;
  auto verify_names = [&](const Json& doc, const std::string& property, const std::string& tag) {
    const auto path = dir / "fault.json";
    std::ofstream(path, std::ios::binary) << doc.dump(1);
    const auto r = cli({"verify", path.string()});
    c.expect(r.code == 1, tag + " exit " + std::to_string(r.code));
    bool named = false;
    if (r.code == 1) {
      const Json report = Json::parse(r.out);
      for (const auto& f : report["failures"]) named = named || f == property;
    }
    c.expect(named, tag + " does not name " + property);
  };

  for (const std::string kind : {"ltf", "relu", "l2"}) {
    std::vector<std::string> bodies;
    for (int rep = 0; rep < 2; ++rep) {
      const auto path = dir / (kind + std::to_string(rep) + ".json");
      const auto r = cli({"forge", "--kind", kind, "--m", "8", "--s", "3", "--d", "1", "--k", "2", "--ambient", "24",
                          "--mode", "desk", "--seed", "1", "-o", path.string()});
      c.expect(r.code == 0, kind + " forge");
      bodies.push_back(slurp(path));
    }
    c.expect(bodies[0] == bodies[1], kind + " forge not reproducible");
    const auto inst = dir / (kind + "0.json");
    c.expect(cli({"verify", inst.string()}).code == 0, kind + " verify");
    const auto s1 = cli({"sample", inst.string(), "-n", "500", "--seed", "7"});
    const auto s2 = cli({"sample", inst.string(), "-n", "500", "--seed", "7"});
    c.expect(s1.code == 0 && s1.out == s2.out, kind + " sample not reproducible");
    const auto d1 = cli({"duel", "--instance", inst.string(), "--algo", "parity", "--tau", "1/100", "--family", "20",
                         "--c", "3/4", "--seed", "4", "--transcript", (dir / "t1.jsonl").string()});
    const auto d2 = cli({"duel", "--instance", inst.string(), "--algo", "parity", "--tau", "1/100", "--family", "20",
                         "--c", "3/4", "--seed", "4", "--transcript", (dir / "t2.jsonl").string()});
    c.expect(d1.code == 0 && slurp(dir / "t1.jsonl") == slurp(dir / "t2.jsonl"), kind + " duel transcript");

    const Json doc = Json::parse(bodies[0]);
    Json f1 = doc;
    f1["dplus"]["weights"][doc["J"][0].get<std::size_t>()] = "1/1000";
    verify_names(f1, "1a", kind + " D+ on J");
    Json f2 = doc;
    f2["dminus"]["weights"][0] = "1/128";
    verify_names(f2, "dminus_reconstruction", kind + " D- weight");
    Json f3 = doc;
    f3["prior_p"] = "1/2";
    verify_names(f3, "prior", kind + " prior");
    Json f4 = doc;
    std::swap(f4["labels"]["a"], f4["labels"]["b"]);
    verify_names(f4, "labels", kind + " labels");
  }
  const auto strict = dir / "strict.json";
  c.expect(cli({"forge", "--kind", "ltf", "--m", "2000", "--s", "7", "--d", "3", "--k", "1", "--ambient", "4000",
                "--seed", "1", "-o", strict.string()})
                   .code == 0,
           "strict forge");
  c.expect(cli({"verify", strict.string()}).code == 0, "strict verify");
  const std::string text = slurp(strict);
  std::ofstream(dir / "trunc.json", std::ios::binary) << text.substr(0, text.size() / 3);
  c.expect(cli({"verify", (dir / "trunc.json").string()}).code == 3, "truncated file");
  fs::remove_all(dir);
  return c.done("forge/sample/duel byte-reproducible for ltf, relu, l2; verify passes; injected faults named "
                "(1a, dminus_reconstruction, prior, labels); truncated file exits 3");
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"mu feasibility", mu_feasibility},
      {"exact moment matching", moment_matching},
      {"univariate audit grid", prop32_grid},
      {"Fourier and correlation oracles", correlation_oracles},
      {"Massart audits", massart_audits},
      {"weight pipeline", weight_pipeline},
      {"SQ game", sq_game},
      {"threshold reductions", threshold_reductions},
      {"CLI determinism and round-trip", cli_roundtrip},
  };
  const double limits[] = {12.0, 10.0, 60.0, 120.0, 120.0, 120.0, 600.0, 120.0, 120.0};
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double dt = seconds_since(t0);
    if (dt > limits[i]) {
      r.pass = false;
      r.detail += " (over the " + std::to_string(static_cast<int>(limits[i])) + " s budget)";
    }
    failures += !r.pass;
    std::cout << "criterion " << i + 1 << " " << (r.pass ? "PASS" : "FAIL") << " [" << criteria[i].first << ", "
              << std::fixed << std::setprecision(2) << dt << " s] " << r.detail << std::endl;
    std::cout.unsetf(std::ios::fixed);
  }
  return failures == 0 ? 0 : 1;
}
