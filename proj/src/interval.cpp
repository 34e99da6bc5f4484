#include "massart/interval.hpp"

#include <mpfr.h>

#include "massart/errors.hpp"

namespace massart::interval {
namespace {

class Mpfr {
 public:
  Mpfr() { mpfr_init2(v_, kPrecisionBits); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;
  mpfr_ptr get() { return v_; }

  Rational to_rational() {
    Rational q;
    mpfr_get_q(q.get_mpq_t(), v_);
    q.canonicalize();
    return q;
  }

 private:
  mpfr_t v_;
};

}  // namespace

Interval exp_neg(const Rational& x) {
  if (x < 0) throw DomainError("exp_neg: argument must be nonnegative");
  Mpfr lo, hi;
  // exp(-x) is decreasing in x: round the argument away from the target bound.
  mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDU);
  mpfr_neg(lo.get(), lo.get(), MPFR_RNDN);
  mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_neg(hi.get(), hi.get(), MPFR_RNDN);
  mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

Interval sqrt(const Rational& x) {
  if (x < 0) throw DomainError("sqrt: argument must be nonnegative");
  Mpfr lo, hi;
  mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_sqrt(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDU);
  mpfr_sqrt(hi.get(), hi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

Interval inv_sqrt(const Rational& x) {
  if (x <= 0) throw DomainError("inv_sqrt: argument must be positive");
  Mpfr lo, hi;
  mpfr_set_q(lo.get(), x.get_mpq_t(), MPFR_RNDU);
  mpfr_rec_sqrt(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_set_q(hi.get(), x.get_mpq_t(), MPFR_RNDD);
  mpfr_rec_sqrt(hi.get(), hi.get(), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

Interval cos_pi_over_pow(long s, long m) {
  if (s < 2 || m < 0) throw DomainError("cos_pi_over_pow: need s >= 2 and m >= 0");
  Mpfr lo, hi;
  // cos is decreasing on [0, pi/2], so the upper angle gives the lower value.
  mpfr_const_pi(lo.get(), MPFR_RNDU);
  mpfr_div_ui(lo.get(), lo.get(), static_cast<unsigned long>(s), MPFR_RNDU);
  mpfr_cos(lo.get(), lo.get(), MPFR_RNDD);
  mpfr_pow_ui(lo.get(), lo.get(), static_cast<unsigned long>(m), MPFR_RNDD);
  mpfr_const_pi(hi.get(), MPFR_RNDD);
  mpfr_div_ui(hi.get(), hi.get(), static_cast<unsigned long>(s), MPFR_RNDD);
  mpfr_cos(hi.get(), hi.get(), MPFR_RNDU);
  mpfr_pow_ui(hi.get(), hi.get(), static_cast<unsigned long>(m), MPFR_RNDU);
  return {lo.to_rational(), hi.to_rational()};
}

Interval scale(const Interval& iv, const Rational& c) {
  if (c < 0) throw DomainError("scale: factor must be nonnegative");
  return {iv.lo * c, iv.hi * c};
}

}  // namespace massart::interval
