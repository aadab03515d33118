#include "badk/real.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace badk {

namespace {

// Raises the precision of x to at least prec without changing its value.
void widen(mpfr_t x, Precision prec) {
  if (mpfr_get_prec(x) < prec) mpfr_prec_round(x, prec, MPFR_RNDN);
}

Precision max_prec(const Real& a, const Real& b) { return std::max(a.prec(), b.prec()); }

}  // namespace

Real::Real(Precision prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_zero(lo_, 1);
  mpfr_set_zero(hi_, 1);
}

Real::Real(long value, Precision prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_si(lo_, value, MPFR_RNDD);
  mpfr_set_si(hi_, value, MPFR_RNDU);
}

Real::Real(const mpz_class& value, Precision prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_z(lo_, value.get_mpz_t(), MPFR_RNDD);
  mpfr_set_z(hi_, value.get_mpz_t(), MPFR_RNDU);
}

Real::Real(const mpq_class& value, Precision prec) {
  mpfr_init2(lo_, prec);
  mpfr_init2(hi_, prec);
  mpfr_set_q(lo_, value.get_mpq_t(), MPFR_RNDD);
  mpfr_set_q(hi_, value.get_mpq_t(), MPFR_RNDU);
}

Real Real::from_double(double value, Precision prec) {
  Real r(std::max<Precision>(prec, 64));
  mpfr_set_d(r.lo_, value, MPFR_RNDD);
  mpfr_set_d(r.hi_, value, MPFR_RNDU);
  return r;
}

Real Real::from_string(const std::string& text, Precision prec) {
  Real r(prec);
  if (mpfr_set_str(r.lo_, text.c_str(), 10, MPFR_RNDD) != 0 ||
      mpfr_set_str(r.hi_, text.c_str(), 10, MPFR_RNDU) != 0) {
    throw std::invalid_argument("not a decimal number: " + text);
  }
  return r;
}

Real Real::hull(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Real Real::interval(double lo, double hi, Precision prec) {
  Real r(std::max<Precision>(prec, 64));
  mpfr_set_d(r.lo_, std::min(lo, hi), MPFR_RNDD);
  mpfr_set_d(r.hi_, std::max(lo, hi), MPFR_RNDU);
  return r;
}

Real Real::pi(Precision prec) {
  Real r(prec);
  mpfr_const_pi(r.lo_, MPFR_RNDD);
  mpfr_const_pi(r.hi_, MPFR_RNDU);
  return r;
}

Real::Real(const Real& other) {
  mpfr_init2(lo_, other.prec());
  mpfr_init2(hi_, other.prec());
  mpfr_set(lo_, other.lo_, MPFR_RNDD);
  mpfr_set(hi_, other.hi_, MPFR_RNDU);
}

Real::Real(Real&& other) noexcept {
  mpfr_init2(lo_, MPFR_PREC_MIN);
  mpfr_init2(hi_, MPFR_PREC_MIN);
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
}

Real& Real::operator=(const Real& other) {
  if (this != &other) {
    mpfr_set_prec(lo_, other.prec());
    mpfr_set_prec(hi_, other.prec());
    mpfr_set(lo_, other.lo_, MPFR_RNDD);
    mpfr_set(hi_, other.hi_, MPFR_RNDU);
  }
  return *this;
}

Real& Real::operator=(Real&& other) noexcept {
  mpfr_swap(lo_, other.lo_);
  mpfr_swap(hi_, other.hi_);
  return *this;
}

Real::~Real() {
  mpfr_clear(lo_);
  mpfr_clear(hi_);
}

double Real::mid() const {
  mpfr_t m;
  mpfr_init2(m, prec() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  double d = mpfr_get_d(m, MPFR_RNDN);
  mpfr_clear(m);
  return d;
}

double Real::rad() const {
  mpfr_t w;
  mpfr_init2(w, 64);
  mpfr_sub(w, hi_, lo_, MPFR_RNDU);
  mpfr_div_2ui(w, w, 1, MPFR_RNDU);
  double d = mpfr_get_d(w, MPFR_RNDU);
  mpfr_clear(w);
  return d;
}

double Real::relative_rad() const {
  const double m = std::fabs(mid());
  if (m == 0.0) return is_zero() ? 0.0 : std::numeric_limits<double>::infinity();
  return rad() / m;
}

bool Real::contains_zero() const { return mpfr_sgn(lo_) <= 0 && mpfr_sgn(hi_) >= 0; }

bool Real::contains(double value) const {
  return mpfr_cmp_d(lo_, value) <= 0 && mpfr_cmp_d(hi_, value) >= 0;
}

bool Real::contains(const Real& other) const {
  return mpfr_lessequal_p(lo_, other.lo_) && mpfr_greaterequal_p(hi_, other.hi_);
}

bool Real::overlaps(const Real& other) const {
  return mpfr_lessequal_p(lo_, other.hi_) && mpfr_greaterequal_p(hi_, other.lo_);
}

bool Real::less_than(const Real& other) const {
  if (mpfr_less_p(hi_, other.lo_)) return true;
  if (mpfr_greaterequal_p(lo_, other.hi_)) return false;
  throw PrecisionError("comparison undecided: " + to_string() + " vs " + other.to_string());
}

bool Real::less_than(double other) const {
  if (mpfr_cmp_d(hi_, other) < 0) return true;
  if (mpfr_cmp_d(lo_, other) >= 0) return false;
  throw PrecisionError("comparison undecided: " + to_string() + " vs " + std::to_string(other));
}

int Real::sign() const {
  if (mpfr_sgn(lo_) > 0) return 1;
  if (mpfr_sgn(hi_) < 0) return -1;
  if (is_zero()) return 0;
  throw PrecisionError("sign undecided: " + to_string());
}

bool Real::unique_integer(mpz_class& out) const {
  mpz_class lo_ceil, hi_floor;
  mpfr_get_z(lo_ceil.get_mpz_t(), lo_, MPFR_RNDU);
  mpfr_get_z(hi_floor.get_mpz_t(), hi_, MPFR_RNDD);
  if (lo_ceil != hi_floor) return false;
  out = lo_ceil;
  return true;
}

mpz_class Real::round_mid() const {
  mpfr_t m;
  mpfr_init2(m, prec() + 1);
  mpfr_add(m, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(m, m, 1, MPFR_RNDN);
  mpz_class z;
  mpfr_get_z(z.get_mpz_t(), m, MPFR_RNDN);
  mpfr_clear(m);
  return z;
}

Real Real::center() const {
  Real r(prec());
  mpfr_add(r.lo_, lo_, hi_, MPFR_RNDN);
  mpfr_div_2ui(r.lo_, r.lo_, 1, MPFR_RNDN);
  mpfr_set(r.hi_, r.lo_, MPFR_RNDN);
  return r;
}

Real Real::operator-() const {
  Real r(prec());
  mpfr_neg(r.lo_, hi_, MPFR_RNDD);
  mpfr_neg(r.hi_, lo_, MPFR_RNDU);
  return r;
}

Real& Real::operator+=(const Real& o) {
  widen(lo_, o.prec());
  widen(hi_, o.prec());
  mpfr_add(lo_, lo_, o.lo_, MPFR_RNDD);
  mpfr_add(hi_, hi_, o.hi_, MPFR_RNDU);
  return *this;
}

Real& Real::operator-=(const Real& o) {
  widen(lo_, o.prec());
  widen(hi_, o.prec());
  // lo - o.hi and hi - o.lo; o may alias *this
  Real tmp(o);
  mpfr_sub(lo_, lo_, tmp.hi_, MPFR_RNDD);
  mpfr_sub(hi_, hi_, tmp.lo_, MPFR_RNDU);
  return *this;
}

Real& Real::operator*=(const Real& o) {
  const Precision p = max_prec(*this, o);
  const bool a_nonneg = mpfr_sgn(lo_) >= 0;
  const bool b_nonneg = mpfr_sgn(o.lo_) >= 0;
  Real r(p);
  if (a_nonneg && b_nonneg) {
    mpfr_mul(r.lo_, lo_, o.lo_, MPFR_RNDD);
    mpfr_mul(r.hi_, hi_, o.hi_, MPFR_RNDU);
  } else {
    mpfr_t t;
    mpfr_init2(t, p);
    mpfr_srcptr as[2] = {lo_, hi_};
    mpfr_srcptr bs[2] = {o.lo_, o.hi_};
    mpfr_mul(r.lo_, as[0], bs[0], MPFR_RNDD);
    mpfr_mul(r.hi_, as[0], bs[0], MPFR_RNDU);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        if (i == 0 && j == 0) continue;
        mpfr_mul(t, as[i], bs[j], MPFR_RNDD);
        mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
        mpfr_mul(t, as[i], bs[j], MPFR_RNDU);
        mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
      }
    }
    mpfr_clear(t);
  }
  *this = std::move(r);
  return *this;
}

Real& Real::operator/=(const Real& o) {
  if (o.contains_zero()) {
    throw PrecisionError("division by an enclosure containing zero: " + o.to_string());
  }
  const Precision p = max_prec(*this, o);
  Real r(p);
  mpfr_t t;
  mpfr_init2(t, p);
  mpfr_srcptr as[2] = {lo_, hi_};
  mpfr_srcptr bs[2] = {o.lo_, o.hi_};
  mpfr_div(r.lo_, as[0], bs[0], MPFR_RNDD);
  mpfr_div(r.hi_, as[0], bs[0], MPFR_RNDU);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (i == 0 && j == 0) continue;
      mpfr_div(t, as[i], bs[j], MPFR_RNDD);
      mpfr_min(r.lo_, r.lo_, t, MPFR_RNDD);
      mpfr_div(t, as[i], bs[j], MPFR_RNDU);
      mpfr_max(r.hi_, r.hi_, t, MPFR_RNDU);
    }
  }
  mpfr_clear(t);
  *this = std::move(r);
  return *this;
}

Real abs(const Real& x) {
  if (mpfr_sgn(x.lo_) >= 0) return x;
  if (mpfr_sgn(x.hi_) <= 0) return -x;
  Real r(x.prec());
  mpfr_set_zero(r.lo_, 1);
  mpfr_neg(r.hi_, x.lo_, MPFR_RNDU);
  mpfr_max(r.hi_, r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Real sqr(const Real& x) {
  Real a = abs(x);
  Real r(x.prec());
  mpfr_sqr(r.lo_, a.lo_, MPFR_RNDD);
  mpfr_sqr(r.hi_, a.hi_, MPFR_RNDU);
  return r;
}

Real sqrt(const Real& x) {
  if (mpfr_sgn(x.hi_) < 0) throw std::domain_error("sqrt of a negative enclosure");
  Real r(x.prec());
  if (mpfr_sgn(x.lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_sqrt(r.lo_, x.lo_, MPFR_RNDD);
  }
  mpfr_sqrt(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Real exp(const Real& x) {
  Real r(x.prec());
  mpfr_exp(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_exp(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Real log(const Real& x) {
  if (mpfr_sgn(x.hi_) <= 0) throw std::domain_error("log of a nonpositive enclosure");
  if (mpfr_sgn(x.lo_) <= 0) throw PrecisionError("log of an enclosure touching zero");
  Real r(x.prec());
  mpfr_log(r.lo_, x.lo_, MPFR_RNDD);
  mpfr_log(r.hi_, x.hi_, MPFR_RNDU);
  return r;
}

Real max(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_max(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_max(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Real min(const Real& a, const Real& b) {
  Real r(max_prec(a, b));
  mpfr_min(r.lo_, a.lo_, b.lo_, MPFR_RNDD);
  mpfr_min(r.hi_, a.hi_, b.hi_, MPFR_RNDU);
  return r;
}

Real pow(const Real& x, long n) {
  if (n < 0) return Real(1, x.prec()) / pow(x, -n);
  Real result(1, x.prec());
  Real base = x;
  unsigned long e = static_cast<unsigned long>(n);
  // even powers are handled by sqr so the result stays nonnegative
  while (e > 0) {
    if (e & 1UL) result *= base;
    e >>= 1;
    if (e > 0) base = sqr(base);
  }
  return result;
}

Real root(const Real& x, unsigned long n) {
  if (mpfr_sgn(x.hi_) < 0) throw std::domain_error("root of a negative enclosure");
  Real r(x.prec());
  if (mpfr_sgn(x.lo_) <= 0) {
    mpfr_set_zero(r.lo_, 1);
  } else {
    mpfr_rootn_ui(r.lo_, x.lo_, n, MPFR_RNDD);
  }
  mpfr_rootn_ui(r.hi_, x.hi_, n, MPFR_RNDU);
  return r;
}

std::string Real::to_string(int digits) const {
  char buf[160];
  if (is_exact()) {
    mpfr_snprintf(buf, sizeof buf, "%.*Rg", digits, lo_);
  } else {
    mpfr_snprintf(buf, sizeof buf, "[%.*RDg, %.*RUg]", digits, lo_, digits, hi_);
  }
  return buf;
}

std::ostream& operator<<(std::ostream& os, const Real& x) { return os << x.to_string(); }

Complex& Complex::operator+=(const Complex& o) {
  re += o.re;
  im += o.im;
  return *this;
}

Complex& Complex::operator-=(const Complex& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

Complex& Complex::operator*=(const Complex& o) {
  if (is_real() && o.is_real()) {
    re *= o.re;
    return *this;
  }
  if (o.is_real()) {
    re *= o.re;
    im *= o.re;
    return *this;
  }
  if (is_real()) {
    im = re * o.im;
    re *= o.re;
    return *this;
  }
  Real r = re * o.re - im * o.im;
  Real i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex& Complex::operator/=(const Complex& o) {
  if (o.is_real()) {
    re /= o.re;
    im /= o.re;
    return *this;
  }
  Real denom = sqr(o.re) + sqr(o.im);
  Real r = (re * o.re + im * o.im) / denom;
  Real i = (im * o.re - re * o.im) / denom;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

Complex conj(const Complex& z) { return {z.re, -z.im}; }

Real abs(const Complex& z) {
  if (z.is_real()) return abs(z.re);
  return sqrt(sqr(z.re) + sqr(z.im));
}

Real abs_squared(const Complex& z) {
  if (z.is_real()) return sqr(z.re);
  return sqr(z.re) + sqr(z.im);
}

Complex scale(const Complex& z, const Real& s) {
  if (z.is_real()) return Complex(z.re * s);
  return {z.re * s, z.im * s};
}

}  // namespace badk
