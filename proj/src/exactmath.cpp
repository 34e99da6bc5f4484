#include "massart/exactmath.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <stdexcept>

#include "massart/errors.hpp"

namespace massart::exactmath {

Rational frac(const Integer& num, const Integer& den) {
  if (den == 0) throw DomainError("frac: zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Integer binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

Rational pow2(long e) {
  Integer p;
  mpz_ui_pow_ui(p.get_mpz_t(), 2, static_cast<unsigned long>(e < 0 ? -e : e));
  if (e >= 0) return Rational(p);
  Rational r(Integer(1), p);
  r.canonicalize();
  return r;
}

Rational binom_pmf(int m, int x) {
  if (m < 0 || x < 0 || x > m) {
    throw DomainError("binom_pmf: x=" + std::to_string(x) + " outside [0, " + std::to_string(m) + "]");
  }
  Rational r = Rational(binomial(m, x)) * pow2(-m);
  r.canonicalize();
  return r;
}

namespace {

void check_kravchuk_args(int t, int x, int m, const char* who) {
  if (m < 0 || t < 0 || t > m || x < 0 || x > m) {
    throw DomainError(std::string(who) + ": need 0 <= t, x <= m (t=" + std::to_string(t) +
                      ", x=" + std::to_string(x) + ", m=" + std::to_string(m) + ")");
  }
}

}  // namespace

Integer kravchuk_eval(int t, int x, int m) {
  check_kravchuk_args(t, x, m, "kravchuk_eval");
  Integer sum = 0;
  for (int j = 0; j <= t; ++j) {
    Integer term = binomial(x, j) * binomial(m - x, t - j);
    if (j % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

Integer kravchuk_subset_oracle(int t, int x, int m) {
  check_kravchuk_args(t, x, m, "kravchuk_subset_oracle");
  if (m > 20) throw ResourceError("kravchuk_subset_oracle: m > 20 would enumerate too many subsets");
  // y = 1^x 0^(m-x): bit i of y is set for i < x.
  const std::uint32_t y = x == 0 ? 0u : ((1u << x) - 1u);
  long long sum = 0;
  for (std::uint32_t T = 0; T < (1u << m); ++T) {
    if (std::popcount(T) != t) continue;
    sum += (std::popcount(T & y) % 2 == 0) ? 1 : -1;
  }
  return Integer(static_cast<long>(sum));
}

std::vector<Integer> kravchuk_column(int x, int m, int tmax) {
  check_kravchuk_args(tmax, x, m, "kravchuk_column");
  std::vector<Integer> col(static_cast<std::size_t>(tmax) + 1);
  col[0] = 1;
  if (tmax >= 1) col[1] = m - 2 * x;
  // (t+1) K_{t+1} = (m - 2x) K_t - (m - t + 1) K_{t-1}
  for (int t = 1; t < tmax; ++t) {
    Integer next = Integer(m - 2 * x) * col[t] - Integer(m - t + 1) * col[t - 1];
    mpz_divexact_ui(next.get_mpz_t(), next.get_mpz_t(), static_cast<unsigned long>(t + 1));
    col[t + 1] = std::move(next);
  }
  return col;
}

UnivariateMeasure::UnivariateMeasure(int m, std::vector<Rational> weights)
    : m_(m), weights_(std::move(weights)) {
  if (m < 0 || weights_.size() != static_cast<std::size_t>(m) + 1) {
    throw DomainError("UnivariateMeasure: expected m+1 weights");
  }
  for (auto& w : weights_) {
    w.canonicalize();
    if (w < 0) throw DomainError("UnivariateMeasure: negative weight");
  }
}

UnivariateMeasure UnivariateMeasure::binomial(int m) {
  std::vector<Rational> w;
  w.reserve(static_cast<std::size_t>(m) + 1);
  for (int x = 0; x <= m; ++x) w.push_back(binom_pmf(m, x));
  return UnivariateMeasure(m, std::move(w));
}

UnivariateMeasure UnivariateMeasure::point_mass(int m, int x) {
  if (x < 0 || x > m) throw DomainError("point_mass: x outside [0, m]");
  std::vector<Rational> w(static_cast<std::size_t>(m) + 1, Rational(0));
  w[static_cast<std::size_t>(x)] = 1;
  return UnivariateMeasure(m, std::move(w));
}

Rational UnivariateMeasure::mass() const {
  Rational total = 0;
  for (const auto& w : weights_) total += w;
  return total;
}

UnivariateMeasure UnivariateMeasure::normalized() const {
  const Rational total = mass();
  if (total == 0) throw DomainError("normalized: zero measure");
  std::vector<Rational> w = weights_;
  for (auto& v : w) v /= total;
  return UnivariateMeasure(m_, std::move(w));
}

Rational measure_moment(const UnivariateMeasure& a, int t) {
  if (t < 0 || t > a.m()) throw DomainError("measure_moment: degree outside [0, m]");
  Rational sum = 0;
  for (int x = 0; x <= a.m(); ++x) {
    if (a[x] == 0) continue;
    sum += a[x] * Rational(kravchuk_eval(t, x, a.m()));
  }
  return sum;
}

std::vector<Rational> measure_moments(const UnivariateMeasure& a, int tmax) {
  if (tmax < 0 || tmax > a.m()) throw DomainError("measure_moments: degree outside [0, m]");
  std::vector<Rational> out(static_cast<std::size_t>(tmax) + 1, Rational(0));
  for (int x = 0; x <= a.m(); ++x) {
    if (a[x] == 0) continue;
    const auto col = kravchuk_column(x, a.m(), tmax);
    for (int t = 0; t <= tmax; ++t) out[t] += a[x] * Rational(col[t]);
  }
  return out;
}

Rational chi_squared_div(const UnivariateMeasure& p, const UnivariateMeasure& q) {
  if (p.m() != q.m()) throw DomainError("chi_squared_div: support sizes differ");
  if (!p.is_probability() || !q.is_probability()) {
    throw DomainError("chi_squared_div: both measures must be normalized");
  }
  Rational sum = 0;
  for (int x = 0; x <= p.m(); ++x) {
    if (p[x] == 0) continue;
    if (q[x] == 0) throw DivergenceInfinite("chi_squared_div: P charges x=" + std::to_string(x) + " where Q = 0");
    sum += p[x] * p[x] / q[x];
  }
  return sum - 1;
}

CubePmf::CubePmf(int dim, std::vector<Rational> values) : dim_(dim), values_(std::move(values)) {
  if (dim < 0 || dim > kMaxDenseCubeDim) {
    throw ResourceError("CubePmf: dimension " + std::to_string(dim) + " exceeds dense cap " +
                        std::to_string(kMaxDenseCubeDim));
  }
  if (values_.size() != (std::size_t{1} << dim)) throw DomainError("CubePmf: expected 2^M values");
  Rational total = 0;
  for (auto& v : values_) {
    v.canonicalize();
    if (v < 0) throw DomainError("CubePmf: negative probability");
    total += v;
  }
  if (total != 1) throw DomainError("CubePmf: values do not sum to 1");
}

CubePmf CubePmf::uniform(int dim) {
  if (dim < 0 || dim > kMaxDenseCubeDim) throw ResourceError("CubePmf::uniform: dimension exceeds dense cap");
  return CubePmf(dim, std::vector<Rational>(std::size_t{1} << dim, pow2(-dim)));
}

Rational chi_inner_product(const CubePmf& p, const CubePmf& q, const CubePmf& base) {
  if (p.dim() != q.dim() || p.dim() != base.dim()) throw DomainError("chi_inner_product: dimensions differ");
  Rational sum = 0;
  for (std::size_t x = 0; x < base.values().size(); ++x) {
    const Rational& px = p.values()[x];
    const Rational& qx = q.values()[x];
    if (base.values()[x] == 0) {
      if (px != 0 || qx != 0) {
        throw DivergenceInfinite("chi_inner_product: support not contained in the base support");
      }
      continue;
    }
    if (px == 0 || qx == 0) continue;
    sum += px * qx / base.values()[x];
  }
  return sum - 1;
}

std::vector<Rational> fourier_coefficients(const CubePmf& p) {
  std::vector<Rational> a = p.values();
  const std::size_t n = a.size();
  for (std::size_t h = 1; h < n; h <<= 1) {
    for (std::size_t i = 0; i < n; i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        Rational u = a[j];
        Rational v = a[j + h];
        a[j] = u + v;
        a[j + h] = u - v;
      }
    }
  }
  return a;
}

Rational chi_uniform_fourier(const CubePmf& p, const CubePmf& q) {
  if (p.dim() != q.dim()) throw DomainError("chi_uniform_fourier: dimensions differ");
  const auto ph = fourier_coefficients(p);
  const auto qh = fourier_coefficients(q);
  Rational sum = 0;
  for (std::size_t t = 0; t < ph.size(); ++t) sum += ph[t] * qh[t];
  return sum - 1;
}

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto fail = [&] { return DomainError("parse_rational: malformed value '" + s + "'"); };
  if (s.empty()) throw fail();
  if (auto slash = s.find('/'); slash != std::string::npos) {
    Integer num, den;
    if (num.set_str(s.substr(0, slash), 10) != 0 || den.set_str(s.substr(slash + 1), 10) != 0) throw fail();
    if (den == 0) throw fail();
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  // Decimal with optional exponent, parsed exactly.
  std::size_t pos = 0;
  bool negative = false;
  if (s[pos] == '+' || s[pos] == '-') negative = s[pos++] == '-';
  std::string digits;
  long frac_digits = 0;
  bool seen_point = false;
  bool any_digit = false;
  for (; pos < s.size(); ++pos) {
    const char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      digits.push_back(c);
      any_digit = true;
      if (seen_point) ++frac_digits;
    } else if (c == '.' && !seen_point) {
      seen_point = true;
    } else {
      break;
    }
  }
  if (!any_digit) throw fail();
  long exponent = 0;
  if (pos < s.size()) {
    if (s[pos] != 'e' && s[pos] != 'E') throw fail();
    const std::string exp_text = s.substr(pos + 1);
    if (exp_text.empty()) throw fail();
    std::size_t used = 0;
    try {
      exponent = std::stol(exp_text, &used);
    } catch (const std::exception&) {
      throw fail();
    }
    if (used != exp_text.size()) throw fail();
  }
  Integer num(digits, 10);
  if (negative) num = -num;
  const long shift = exponent - frac_digits;
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(shift < 0 ? -shift : shift));
  Rational r = shift >= 0 ? Rational(num * ten_pow) : Rational(num, ten_pow);
  r.canonicalize();
  return r;
}

std::string to_decimal(const Rational& r, int digits) {
  Integer den = r.get_den();
  // Terminating expansions are printed exactly.
  Integer reduced = den;
  int twos = 0, fives = 0;
  while (mpz_divisible_ui_p(reduced.get_mpz_t(), 2)) { reduced /= 2; ++twos; }
  while (mpz_divisible_ui_p(reduced.get_mpz_t(), 5)) { reduced /= 5; ++fives; }
  const bool terminating = reduced == 1;
  const int places = terminating ? std::min(std::max(twos, fives), digits) : digits;
  Integer scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(places));
  Integer num = r.get_num();
  const bool negative = num < 0;
  if (negative) num = -num;
  Integer scaled = num * scale;
  Integer q;
  mpz_tdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), den.get_mpz_t());
  std::string body = q.get_str();
  if (places > 0) {
    if (body.size() <= static_cast<std::size_t>(places)) {
      body.insert(0, static_cast<std::size_t>(places) + 1 - body.size(), '0');
    }
    body.insert(body.size() - static_cast<std::size_t>(places), ".");
  }
  return (negative ? "-" : "") + body;
}

}  // namespace massart::exactmath
