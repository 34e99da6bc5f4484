#include "massart/serialize.hpp"

#include <fstream>
#include <sstream>

#include "massart/errors.hpp"

namespace massart::serialize {

using instances::InstanceBundle;

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field '") + key + "'");
  return j.at(key);
}

template <class T>
T get(const Json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

Json to_json(const Rational& r) { return exactmath::to_string(r); }

Rational rational_from_json(const Json& j) {
  if (!j.is_string()) throw FormatError("rational must be a \"num/den\" string");
  try {
    return exactmath::parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    throw FormatError(std::string("bad rational: ") + e.what());
  }
}

Json to_json(const Interval& iv) { return Json{{"lo", to_json(iv.lo)}, {"hi", to_json(iv.hi)}}; }

Json to_json(const UnivariateMeasure& a) {
  Json w = Json::array();
  for (const auto& v : a.weights()) w.push_back(to_json(v));
  return Json{{"m", a.m()}, {"weights", std::move(w)}};
}

UnivariateMeasure measure_from_json(const Json& j) {
  const int m = get<int>(j, "m");
  const Json& w = field(j, "weights");
  if (!w.is_array()) throw FormatError("weights must be an array");
  std::vector<Rational> weights;
  for (const auto& v : w) weights.push_back(rational_from_json(v));
  try {
    return UnivariateMeasure(m, std::move(weights));
  } catch (const Error& e) {
    throw FormatError(std::string("measure: ") + e.what());
  }
}

Json to_json(const univariate::SignedCorrection& mu) {
  Json v = Json::array();
  for (const auto& x : mu.values()) v.push_back(to_json(x));
  return Json{{"s", mu.s()}, {"k", mu.k()}, {"values", std::move(v)}};
}

univariate::SignedCorrection correction_from_json(const Json& j) {
  std::vector<Rational> values;
  const Json& v = field(j, "values");
  if (!v.is_array()) throw FormatError("mu values must be an array");
  for (const auto& x : v) values.push_back(rational_from_json(x));
  try {
    return univariate::SignedCorrection(get<int>(j, "s"), get<int>(j, "k"), std::move(values));
  } catch (const Error& e) {
    throw FormatError(std::string("mu: ") + e.what());
  }
}

Json to_json(const univariate::UnivariateParams& p) {
  return Json{{"m", p.m}, {"s", p.s}, {"d", p.d}, {"k", p.k}, {"zeta_log_const", to_json(p.zeta_log_const)}};
}

univariate::UnivariateParams params_from_json(const Json& j) {
  univariate::UnivariateParams p;
  p.m = get<int>(j, "m");
  p.s = get<int>(j, "s");
  p.d = get<int>(j, "d");
  p.k = get<int>(j, "k");
  p.zeta_log_const = rational_from_json(field(j, "zeta_log_const"));
  return p;
}

Json to_json(const std::vector<AuditCheck>& checks) {
  Json out = Json::array();
  for (const auto& c : checks) out.push_back(Json{{"property", c.property}, {"pass", c.pass}, {"detail", c.detail}});
  return out;
}

Json to_json(const univariate::Prop32Report& r) {
  return Json{{"all_pass", r.all_pass()},
              {"checks", to_json(r.checks)},
              {"dplus_ratio_min", to_json(r.dplus_ratio_min)},
              {"dplus_ratio_max", to_json(r.dplus_ratio_max)},
              {"dminus_mass_outside_J", to_json(r.dminus_mass_outside_J)},
              {"zeta", to_json(r.zeta)},
              {"nu_dplus", to_json(r.nu_dplus)},
              {"nu_dminus", to_json(r.nu_dminus)},
              {"dminus_moment_bound", to_json(r.dminus_moment_bound)},
              {"norm_dplus", to_json(r.norm_dplus)},
              {"norm_dminus", to_json(r.norm_dminus)}};
}

Json to_json(const instances::MassartReport& r) {
  return Json{{"all_pass", r.all_pass()},
              {"checks", to_json(r.checks)},
              {"noise_rate_on_J", to_json(r.noise_rate_on_J)},
              {"max_noise_rate_off_J", to_json(r.max_noise_rate_off_J)},
              {"dminus_mass_off_J", to_json(r.dminus_mass_off_J)},
              {"zeta", to_json(r.zeta)},
              {"opt_zero_one", to_json(r.opt_zero_one)},
              {"opt_squared", to_json(r.opt_squared)},
              {"opt_formula", to_json(r.opt_formula)},
              {"l2_budget", to_json(r.l2_budget)}};
}

Json to_json(const junta::SubsetFamily& f) {
  return Json{{"format", kFormatVersion},
              {"ambient", f.ambient_dim},
              {"m", f.m},
              {"overlap_cap", f.overlap_cap},
              {"subsets", f.subsets}};
}

Json to_json(const junta::SqBoundReport& r) {
  return Json{{"format", kFormatVersion},
              {"family_size", r.family_size},
              {"beta", to_json(r.beta)},
              {"gamma", to_json(r.gamma)},
              {"tau", to_json(r.tau)},
              {"query_lower_bound", to_json(r.query_lower_bound)},
              {"query_lower_bound_decimal", exactmath::to_decimal(r.query_lower_bound, 6)},
              {"oracle_tolerance", to_json(r.oracle_tolerance)},
              {"oracle_tolerance_decimal", exactmath::to_decimal(r.oracle_tolerance.lo, 12)}};
}

Json bundle_to_json(const InstanceBundle& b) {
  Json gate = nullptr;
  Json gate_info = nullptr;
  if (b.gate) {
    gate = Json::array();
    for (const auto& c : b.gate->poly.coeffs()) gate.push_back(to_json(c));
    gate_info = Json{{"coeff_exponent", b.gate->coeff_exponent},
                     {"approximation_bits", b.gate->approximation_bits},
                     {"q_off_margin", to_json(b.gate->off_margin)}};
  }
  return Json{{"format", kFormatVersion},
              {"kind", instances::to_string(b.kind)},
              {"mode", instances::to_string(b.mode)},
              {"params", to_json(b.params)},
              {"ambient", b.ambient},
              {"S", b.S},
              {"labels", Json{{"a", to_json(b.labels.a)}, {"b", to_json(b.labels.b)}}},
              {"prior_p", to_json(b.prior)},
              {"dplus", to_json(b.dplus)},
              {"dminus", to_json(b.dminus)},
              {"mu", to_json(b.mu)},
              {"mu_mode", b.mu_mode},
              {"J", b.J.points},
              {"gate_coeffs", std::move(gate)},
              {"gate_info", std::move(gate_info)},
              {"activation", instances::to_string(b.activation.kind)},
              {"veronese_degree", b.veronese_degree},
              {"veronese_dim", b.veronese_dim.get_str()},
              {"seed", b.seed},
              {"audit", Json{{"prop32", to_json(b.prop32)}, {"massart", to_json(b.audit)}}}};
}

InstanceBundle bundle_from_json(const Json& j) {
  if (get<int>(j, "format") != kFormatVersion) throw FormatError("unsupported format version");
  InstanceBundle b;
  try {
    b.kind = instances::parse_kind(get<std::string>(j, "kind"));
    b.mode = instances::parse_mode(get<std::string>(j, "mode"));
    b.activation.kind = instances::parse_activation(get<std::string>(j, "activation"));
  } catch (const DomainError& e) {
    throw FormatError(e.what());
  }
  b.params = params_from_json(field(j, "params"));
  b.ambient = get<int>(j, "ambient");
  b.S = get<std::vector<int>>(j, "S");
  const Json& labels = field(j, "labels");
  b.labels = {rational_from_json(field(labels, "a")), rational_from_json(field(labels, "b"))};
  b.prior = rational_from_json(field(j, "prior_p"));
  b.dplus = measure_from_json(field(j, "dplus"));
  b.dminus = measure_from_json(field(j, "dminus"));
  b.mu = correction_from_json(field(j, "mu"));
  b.mu_mode = get<std::string>(j, "mu_mode");
  b.J.points = get<std::vector<int>>(j, "J");
  const Json& gate = field(j, "gate_coeffs");
  if (!gate.is_null()) {
    if (!gate.is_array()) throw FormatError("gate_coeffs must be an array or null");
    std::vector<Rational> coeffs;
    for (const auto& c : gate) coeffs.push_back(rational_from_json(c));
    instances::GatePolynomial g;
    g.poly = Polynomial(std::move(coeffs));
    g.role = instances::GateRole::p;
    const Json& info = field(j, "gate_info");
    g.coeff_exponent = get<int>(info, "coeff_exponent");
    g.approximation_bits = get<int>(info, "approximation_bits");
    g.off_margin = rational_from_json(field(info, "q_off_margin"));
    b.gate = std::move(g);
  }
  b.veronese_degree = get<int>(j, "veronese_degree");
  const std::string dim = get<std::string>(j, "veronese_dim");
  if (b.veronese_dim.set_str(dim, 10) != 0) throw FormatError("veronese_dim is not an integer");
  b.seed = get<std::uint64_t>(j, "seed");

  if (b.dplus.m() != b.params.m || b.dminus.m() != b.params.m)
    throw FormatError("measure sizes disagree with params.m");
  if (static_cast<int>(b.S.size()) != b.params.m) throw FormatError("|S| disagrees with params.m");
  for (int i : b.S)
    if (i < 0 || i >= b.ambient) throw FormatError("S leaves the ambient cube");
  if (b.kind != instances::Kind::ltf && !b.gate) throw FormatError("relu and l2 bundles need gate_coeffs");
  if (b.prior <= 0 || b.prior >= 1) throw FormatError("prior_p must lie in (0, 1)");
  try {
    b.prop32 = univariate::audit_prop32(b.dplus, b.dminus, b.J, b.params);
    b.audit = instances::massart_audit(b);
  } catch (const Error& e) {
    throw FormatError(std::string("bundle is inconsistent: ") + e.what());
  }
  return b;
}

Json parse_document(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format") || j["format"] != kFormatVersion)
    throw FormatError("missing or unsupported \"format\" field");
  return j;
}

std::string dump(const Json& j) { return j.dump(1) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("error reading " + path);
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error writing " + path);
}

std::string bitstring(std::span<const std::uint8_t> x) {
  std::string s(x.size(), '0');
  for (std::size_t i = 0; i < x.size(); ++i)
    if (x[i]) s[i] = '1';
  return s;
}

std::string sample_csv_row(const Rational& label, std::span<const std::uint8_t> x,
                           std::optional<std::span<const std::uint8_t>> veronese) {
  std::string row = exactmath::to_decimal(label, 20) + "," + bitstring(x);
  if (veronese) row += "," + bitstring(*veronese);
  return row;
}

}  // namespace massart::serialize
