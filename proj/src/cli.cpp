#include "massart/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include "massart/errors.hpp"
#include "massart/serialize.hpp"
#include "massart/sq_sim.hpp"

namespace massart::cli {

namespace {

using instances::InstanceBundle;
using instances::Kind;
using serialize::Json;
using exactmath::UnivariateMeasure;
using univariate::AuditCheck;

struct ParamOptions {
  int m = 0;
  int s = 0;
  int d = 0;
  int k = -1;
  int ambient = 0;
  std::string mode = "strict";
  std::string zeta_const = "1/100";
  std::string instance;
};

void add_param_options(CLI::App* cmd, ParamOptions& o, bool allow_instance) {
  cmd->add_option("--m", o.m, "support size m");
  cmd->add_option("--s", o.s, "spacing s (default round(m^{4/9}))");
  cmd->add_option("--d", o.d, "|J| (default round(m^{1/10}))");
  cmd->add_option("--k", o.k, "matched moments (default round(m^{2/19}))");
  cmd->add_option("--ambient", o.ambient, "ambient dimension m' (default 2m)");
  cmd->add_option("--mode", o.mode, "strict or desk")->check(CLI::IsMember({"strict", "desk"}));
  cmd->add_option("--zeta-const", o.zeta_const, "c in log(1/zeta) = c (ds)^2/m");
  if (allow_instance) cmd->add_option("--instance", o.instance, "read the measures from an instance file instead");
}

univariate::UnivariateParams resolve_params(const ParamOptions& o) {
  if (o.m < 1) throw InfeasibleParams("positive", "--m must be a positive integer");
  univariate::UnivariateParams p;
  p.m = o.m;
  const double m = o.m;
  p.s = o.s > 0 ? o.s : static_cast<int>(std::lround(std::pow(m, 4.0 / 9.0)));
  p.d = o.d > 0 ? o.d : std::max(1, static_cast<int>(std::lround(std::pow(m, 0.1))));
  p.k = o.k >= 0 ? o.k : std::max(1, static_cast<int>(std::lround(std::pow(m, 2.0 / 19.0))));
  p.zeta_log_const = exactmath::parse_rational(o.zeta_const);
  return p;
}

InstanceBundle load_bundle(const std::string& path) {
  return serialize::bundle_from_json(serialize::parse_document(serialize::read_file(path)));
}

/// An instance to draw measures from: the given file, or a fresh ltf assembly.
InstanceBundle base_bundle(const ParamOptions& o, std::uint64_t seed) {
  if (!o.instance.empty()) return load_bundle(o.instance);
  const auto params = resolve_params(o);
  const int ambient = o.ambient > 0 ? o.ambient : 2 * params.m;
  return instances::assemble_instance(Kind::ltf, params, ambient, {instances::ActivationKind::sign}, seed,
                                      instances::parse_mode(o.mode));
}

void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << content;
  } else {
    serialize::write_file(path, content);
  }
}

std::vector<junta::PlantedPair> family_pairs(const InstanceBundle& b, const junta::SubsetFamily& f) {
  std::vector<junta::PlantedPair> out;
  out.reserve(f.subsets.size());
  for (const auto& S : f.subsets) out.push_back(junta::standard_pair(b.ambient, S, b.dplus, b.dminus, b.labels));
  return out;
}

junta::SqBoundReport bound_for(const InstanceBundle& b, long family_size) {
  const auto bin = UnivariateMeasure::binomial(b.params.m);
  const Rational chi_plus = exactmath::chi_squared_div(b.dplus.normalized(), bin);
  const Rational chi_minus = exactmath::chi_squared_div(b.dminus.normalized(), bin);
  const Rational nu = std::max(univariate::max_normalized_moment(b.dplus, b.params.k),
                               univariate::max_normalized_moment(b.dminus, b.params.k));
  return junta::sq_bound_report(family_size, chi_plus, chi_minus, b.params.k, nu);
}

// ---------------------------------------------------------------------------
// verify

// The zeta, moment-decay, mass and 2-4 Bin band checks are advisory in desk mode.
bool gates(instances::AssemblyMode mode, const std::string& property) {
  if (mode == instances::AssemblyMode::strict) return true;
  static const char* const advisory[] = {"2", "3", "4a", "band", "5"};
  return std::none_of(std::begin(advisory), std::end(advisory), [&](const char* a) { return property == a; });
}

std::vector<std::string> gating_failures(const InstanceBundle& b) {
  std::vector<std::string> out;
  for (const auto& f : b.prop32.failures())
    if (gates(b.mode, f)) out.push_back(f);
  for (const auto& f : b.audit.failures()) out.push_back(f);
  return out;
}

Json verify_bundle(const InstanceBundle& b) {
  std::vector<AuditCheck> checks = b.prop32.checks;
  checks.insert(checks.end(), b.audit.checks.begin(), b.audit.checks.end());
  auto add = [&](std::string prop, bool pass, std::string detail) {
    checks.push_back({std::move(prop), pass, std::move(detail)});
  };
  const auto& p = b.params;

  if (b.mode == instances::AssemblyMode::strict) {
    const auto report = univariate::validate_params(p);
    const auto* fail = report.first_failure();
    add("params", fail == nullptr, fail ? fail->name + ": " + fail->detail : "parameter inequalities hold");
  }
  bool j_ok = false;
  try {
    j_ok = univariate::build_forbidden_set(p.m, p.s, p.d) == b.J;
  } catch (const Error&) {
  }
  add("forbidden_set", j_ok, j_ok ? "J matches (m, s, d)" : "J differs from the d multiples of s nearest m/2");
  add("dminus_reconstruction", univariate::build_dminus(p.m, p.s) == b.dminus,
      "D- equals Bin restricted to multiples of s");
  bool mu_ok = b.mu.s() == p.s && b.mu.k() == p.k && b.mu.moments_vanish();
  if (b.mu_mode == "minmax") mu_ok = mu_ok && b.mu.max_off_center() < exactmath::frac(1, 10);
  add("mu_invariants", mu_ok, "mu(0) = -1, moments 0..k vanish" + std::string(b.mu_mode == "minmax" ? ", |mu| < 1/10" : ""));
  bool dplus_ok = false;
  std::string dplus_detail = "D+ differs from 3 Bin + sum_z 3 Bin(z) mu(. - z)";
  try {
    dplus_ok = univariate::build_dplus(p.m, b.J, b.mu) == b.dplus;
    if (dplus_ok) dplus_detail = "D+ rebuilt from J and mu";
  } catch (const Error& e) {
    dplus_detail = e.what();
  }
  add("dplus_reconstruction", dplus_ok, dplus_detail);
  Rational prior = b.dplus.mass() / (b.dplus.mass() + b.dminus.mass());
  prior.canonicalize();
  add("prior", prior == b.prior, "p = |D+| / (|D+| + |D-|)");

  const junta::Labels expected = b.kind == Kind::ltf    ? junta::Labels{1, -1}
                                 : b.kind == Kind::relu ? junta::Labels{-1, 1}
                                                        : junta::Labels{b.activation.f_minus(), b.activation.f_c_plus()};
  add("labels", expected == b.labels, "labels follow the instance kind");

  if (b.gate) {
    bool gate_ok = true;
    for (int x = 0; x <= p.m && gate_ok; ++x) {
      const Rational v = b.gate->poly(Rational(x));
      gate_ok = b.J.contains(x) ? v == 1 : v <= 0;
    }
    add("gate", gate_ok, "p = 1 on J and p <= 0 at the other integers");
  }
  const int degree = b.kind == Kind::ltf ? 2 * p.d : (b.gate ? std::max(1, b.gate->poly.degree()) : -1);
  add("veronese", b.veronese_degree == degree && b.veronese_dim == instances::veronese_dim(b.ambient, degree),
      "Veronese degree and dimension");

  Json failures = Json::array();
  Json advisory = Json::array();
  for (const auto& c : checks) {
    if (c.pass) continue;
    if (gates(b.mode, c.property)) failures.push_back(c.property);
    else advisory.push_back(c.property);
  }
  return Json{{"format", serialize::kFormatVersion},
              {"pass", failures.empty()},
              {"failures", std::move(failures)},
              {"advisory_failures", std::move(advisory)},
              {"checks", serialize::to_json(checks)}};
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Construct, verify and play SQ-hard Massart instances", "massart-forge"};
  app.require_subcommand(1);

  // forge
  ParamOptions forge_opts;
  std::string forge_kind = "ltf";
  std::string forge_activation = "rational_decay";
  std::uint64_t forge_seed = 0;
  std::string forge_out;
  auto* forge = app.add_subcommand("forge", "assemble and audit an instance bundle");
  add_param_options(forge, forge_opts, false);
  forge->add_option("--kind", forge_kind, "ltf, relu or l2")->check(CLI::IsMember({"ltf", "relu", "l2"}));
  forge->add_option("--activation", forge_activation, "l2 activation: rational_decay or relu_hat")
      ->check(CLI::IsMember({"rational_decay", "relu_hat"}));
  forge->add_option("--seed", forge_seed, "64-bit seed");
  forge->add_option("-o,--output", forge_out, "output path (default stdout)");

  // verify
  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "re-run every audit on a serialized bundle");
  verify->add_option("path", verify_path, "instance file")->required();

  // sample
  std::string sample_path;
  long sample_n = 1000;
  std::uint64_t sample_seed = 0;
  bool sample_veronese = false;
  bool sample_null = false;
  std::string sample_out;
  auto* sample = app.add_subcommand("sample", "draw labeled samples as CSV (label,x[,veronese])");
  sample->add_option("path", sample_path, "instance file")->required();
  sample->add_option("-n", sample_n, "number of rows")->check(CLI::NonNegativeNumber);
  sample->add_option("--seed", sample_seed, "64-bit seed");
  sample->add_flag("--veronese", sample_veronese, "append the Veronese embedding");
  sample->add_flag("--null", sample_null, "draw from the null distribution instead");
  sample->add_option("-o,--output", sample_out, "output path (default stdout)");

  // correlate
  ParamOptions corr_opts;
  int corr_family = 64;
  std::string corr_c = "1/2";
  std::uint64_t corr_seed = 0;
  std::string corr_out;
  auto* correlate = app.add_subcommand("correlate", "pairwise correlations over a random subset family");
  add_param_options(correlate, corr_opts, true);
  correlate->add_option("--family", corr_family, "family size")->check(CLI::PositiveNumber);
  correlate->add_option("--c", corr_c, "overlap fraction");
  correlate->add_option("--seed", corr_seed, "64-bit seed");
  correlate->add_option("-o,--output", corr_out, "CSV path (default stdout)");

  // bound
  ParamOptions bound_opts;
  long bound_family = 1024;
  std::uint64_t bound_seed = 0;
  auto* bound = app.add_subcommand("bound", "SQ query lower bound for a family size");
  add_param_options(bound, bound_opts, true);
  bound->add_option("--family", bound_family, "family size s")->check(CLI::PositiveNumber);
  bound->add_option("--seed", bound_seed, "64-bit seed");

  // duel
  ParamOptions duel_opts;
  std::string duel_algo = "parity";
  std::string duel_tau = "0";
  std::string duel_hidden = "planted";
  std::string duel_policy = "toward_null";
  std::string duel_c = "1/2";
  std::string duel_loss = "zero_one";
  std::string duel_transcript;
  int duel_family = 100;
  int duel_degree = 4;
  long duel_budget = 10000;
  std::uint64_t duel_seed = 0;
  auto* duel = app.add_subcommand("duel", "run a distinguisher against a fresh STAT oracle");
  add_param_options(duel, duel_opts, true);
  duel->add_option("--algo", duel_algo, "parity or threshold")->check(CLI::IsMember({"parity", "threshold"}));
  duel->add_option("--tau", duel_tau, "tolerance as an exact decimal or n/d, or 'bound'");
  duel->add_option("--hidden", duel_hidden, "planted or null")->check(CLI::IsMember({"planted", "null"}));
  duel->add_option("--policy", duel_policy, "toward_null or unbiased_random")
      ->check(CLI::IsMember({"toward_null", "unbiased_random"}));
  duel->add_option("--family", duel_family, "family size")->check(CLI::PositiveNumber);
  duel->add_option("--c", duel_c, "overlap fraction of the family");
  duel->add_option("--degree", duel_degree, "parity degree budget")->check(CLI::PositiveNumber);
  duel->add_option("--budget", duel_budget, "query budget")->check(CLI::PositiveNumber);
  duel->add_option("--loss", duel_loss, "threshold loss: zero_one or squared")
      ->check(CLI::IsMember({"zero_one", "squared"}));
  duel->add_option("--seed", duel_seed, "64-bit seed");
  duel->add_option("--transcript", duel_transcript, "write the JSON-lines transcript here");

  std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInfeasible;
  }

  if (forge->parsed()) {
    const auto params = resolve_params(forge_opts);
    const int ambient = forge_opts.ambient > 0 ? forge_opts.ambient : 2 * params.m;
    const auto bundle = instances::assemble_instance(
        instances::parse_kind(forge_kind), params, ambient, {instances::parse_activation(forge_activation)},
        forge_seed, instances::parse_mode(forge_opts.mode));
    emit(forge_out, serialize::dump(serialize::bundle_to_json(bundle)), out);
    if (const auto failed = gating_failures(bundle); !failed.empty()) {
      err << "audit failures:";
      for (const auto& f : failed) err << ' ' << f;
      err << '\n';
      return kExitVerifyFailed;
    }
    return kExitOk;
  }

  if (verify->parsed()) {
    const auto report = verify_bundle(load_bundle(verify_path));
    out << serialize::dump(report);
    return report["pass"].get<bool>() ? kExitOk : kExitVerifyFailed;
  }

  if (sample->parsed()) {
    const auto bundle = load_bundle(sample_path);
    const auto pair = bundle.pair();
    const junta::PlantedSampler sampler(pair);
    Rng rng(sample_seed);
    std::string csv;
    for (long i = 0; i < sample_n; ++i) {
      const auto s = sample_null ? junta::null_sample(pair.prior, pair.plus.ambient_dim(), rng) : sampler.draw(rng);
      const Rational& label = s.is_a ? pair.labels.a : pair.labels.b;
      if (sample_veronese) {
        const auto v = instances::veronese_embed(s.x, bundle.veronese_degree);
        csv += serialize::sample_csv_row(label, s.x, std::span<const std::uint8_t>(v));
      } else {
        csv += serialize::sample_csv_row(label, s.x);
      }
      csv += '\n';
    }
    emit(sample_out, csv, out);
    return kExitOk;
  }

  if (correlate->parsed()) {
    const auto base = base_bundle(corr_opts, corr_seed);
    Rng rng(corr_seed);
    const auto family = junta::build_subset_family(base.ambient, base.params.m, exactmath::parse_rational(corr_c),
                                                   corr_family, rng);
    const int m = base.params.m;
    const int k = base.params.k;
    const auto bin = UnivariateMeasure::binomial(m);
    struct Side {
      const char* name;
      UnivariateMeasure a;
      Rational chi2;
      Rational nu;
      std::vector<Rational> levels;
    };
    std::vector<Side> sides;
    for (const auto* measure : {&base.dplus, &base.dminus}) {
      const auto a = measure->normalized();
      sides.push_back({measure == &base.dplus ? "dplus" : "dminus", a, exactmath::chi_squared_div(a, bin),
                       univariate::max_normalized_moment(a, k), junta::fourier_levels(a, family.overlap_cap)});
    }
    std::string csv = "i,j,overlap,measure,chi,bound,within\n";
    bool all_within = true;
    for (std::size_t i = 0; i < family.subsets.size(); ++i) {
      for (std::size_t j = i + 1; j < family.subsets.size(); ++j) {
        const int r = junta::overlap(family.subsets[i], family.subsets[j]);
        for (const auto& side : sides) {
          const Rational chi = junta::correlation_from_levels(r, side.levels, side.levels);
          const Rational bnd = junta::correlation_bound(r, m, k, side.chi2, side.nu);
          const bool within = abs(chi) <= bnd;
          all_within = all_within && within;
          csv += std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(r) + "," + side.name + "," +
                 exactmath::to_decimal(chi, 20) + "," + exactmath::to_decimal(bnd, 20) + "," +
                 (within ? "1" : "0") + "\n";
        }
      }
    }
    emit(corr_out, csv, out);
    return all_within ? kExitOk : kExitVerifyFailed;
  }

  if (bound->parsed()) {
    const auto base = base_bundle(bound_opts, bound_seed);
    out << serialize::dump(serialize::to_json(bound_for(base, bound_family)));
    return kExitOk;
  }

  if (duel->parsed()) {
    const auto base = base_bundle(duel_opts, duel_seed);
    Rng rng(duel_seed);
    const auto family = junta::build_subset_family(base.ambient, base.params.m, exactmath::parse_rational(duel_c),
                                                   duel_family, rng);
    const Rational tau = duel_tau == "bound" ? bound_for(base, duel_family).oracle_tolerance.lo
                                             : exactmath::parse_rational(duel_tau);
    sq::OracleSession session(family_pairs(base, family), duel_hidden == "planted" ? sq::Mode::planted : sq::Mode::null,
                              tau, duel_policy == "toward_null" ? sq::Policy::toward_null : sq::Policy::unbiased_random,
                              {}, rng.next());
    Json result{{"format", serialize::kFormatVersion}, {"algo", duel_algo}, {"tau", serialize::to_json(tau)}};
    if (duel_algo == "parity") {
      const auto r = sq::parity_distinguisher(session, duel_degree, duel_budget);
      result["verdict"] = sq::to_string(r.verdict);
      result["queries"] = r.queries;
      result["witness"] = r.witness;
    } else {
      // The hypothesis is the ltf target of the first family member, as a function of its statistic.
      const auto& S = family.subsets.front();
      sq::StatisticHypothesis h{S, {}};
      for (int t = 0; t <= base.params.m; ++t)
        h.values.push_back(base.J.contains(t) ? base.labels.b : base.labels.a);
      const auto r = sq::threshold_reduction(session, h, duel_loss == "squared" ? sq::LossKind::squared
                                                                                 : sq::LossKind::zero_one);
      result["verdict"] = sq::to_string(r.verdict);
      result["queries"] = session.query_count();
      result["estimate"] = serialize::to_json(r.estimate.value);
      result["floor"] = serialize::to_json(r.floor);
      result["tolerance"] = serialize::to_json(r.estimate.tolerance);
    }
    if (!duel_transcript.empty()) {
      serialize::write_file(duel_transcript, session.transcript());
      result["transcript"] = duel_transcript;
    }
    out << serialize::dump(result);
    return kExitOk;
  }
  return kExitInfeasible;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(args, out, err);
  } catch (const InfeasibleParams& e) {
    err << "infeasible parameters [" << e.check() << "]: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << '\n';
    return kExitIo;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace massart::cli
