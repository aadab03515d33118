// Certified real and complex enclosures on top of MPFR.
//
// A Real is a closed interval [lo, hi] whose endpoints are MPFR numbers
// rounded outward, so every operation returns an enclosure of the exact
// result. Comparisons either certify an answer or throw PrecisionError.
#pragma once

#include <mpfr.h>
#include <gmpxx.h>

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>

namespace badk {

using Precision = mpfr_prec_t;

inline constexpr Precision kDefaultPrecision = 128;
inline constexpr Precision kMaxPrecision = 1024;

/// Raised when an enclosure is too wide to decide a comparison or to
/// divide. Callers may retry at a higher working precision.
class PrecisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Real {
 public:
  explicit Real(Precision prec = kDefaultPrecision);
  Real(long value, Precision prec);
  Real(const mpz_class& value, Precision prec);
  Real(const mpq_class& value, Precision prec);
  // exact: every finite double is a dyadic rational
  static Real from_double(double value, Precision prec);
  // parses a decimal string into a tight enclosure
  static Real from_string(const std::string& text, Precision prec);
  static Real hull(const Real& a, const Real& b);
  static Real interval(double lo, double hi, Precision prec);
  static Real pi(Precision prec);

  Real(const Real& other);
  Real(Real&& other) noexcept;
  Real& operator=(const Real& other);
  Real& operator=(Real&& other) noexcept;
  ~Real();

  Precision prec() const { return mpfr_get_prec(lo_); }

  double lower() const { return mpfr_get_d(lo_, MPFR_RNDD); }
  double upper() const { return mpfr_get_d(hi_, MPFR_RNDU); }
  double mid() const;
  // upper bound on the half-width
  double rad() const;
  // upper bound on the half-width relative to |mid|
  double relative_rad() const;

  bool is_exact() const { return mpfr_equal_p(lo_, hi_) != 0; }
  bool is_zero() const { return mpfr_zero_p(lo_) && mpfr_zero_p(hi_); }
  bool contains_zero() const;
  bool contains(double value) const;
  bool contains(const Real& other) const;
  bool overlaps(const Real& other) const;
  bool certainly_positive() const { return mpfr_sgn(lo_) > 0; }
  bool certainly_negative() const { return mpfr_sgn(hi_) < 0; }
  bool certainly_nonnegative() const { return mpfr_sgn(lo_) >= 0; }

  // Certified comparisons; throw PrecisionError when the enclosures overlap.
  bool less_than(const Real& other) const;
  bool less_than(double other) const;
  bool greater_equal(double other) const { return !less_than(other); }
  // Certified sign of the value: -1, 0 (exactly zero) or +1.
  int sign() const;

  // the unique integer inside the enclosure, if the enclosure is narrower
  // than one unit and contains exactly one integer
  bool unique_integer(mpz_class& out) const;
  // nearest integer to the midpoint
  mpz_class round_mid() const;
  // the midpoint as an exact (zero-width) enclosure
  Real center() const;

  Real operator-() const;
  Real& operator+=(const Real& other);
  Real& operator-=(const Real& other);
  Real& operator*=(const Real& other);
  Real& operator/=(const Real& other);

  friend Real operator+(Real a, const Real& b) { return a += b; }
  friend Real operator-(Real a, const Real& b) { return a -= b; }
  friend Real operator*(Real a, const Real& b) { return a *= b; }
  friend Real operator/(Real a, const Real& b) { return a /= b; }

  friend Real abs(const Real& x);
  friend Real sqr(const Real& x);
  friend Real sqrt(const Real& x);
  friend Real exp(const Real& x);
  friend Real log(const Real& x);
  friend Real max(const Real& a, const Real& b);
  friend Real min(const Real& a, const Real& b);
  friend Real pow(const Real& x, long n);
  friend Real root(const Real& x, unsigned long n);

  std::string to_string(int digits = 17) const;

  mpfr_srcptr lo_ptr() const { return lo_; }
  mpfr_srcptr hi_ptr() const { return hi_; }

 private:
  mpfr_t lo_;
  mpfr_t hi_;
};

std::ostream& operator<<(std::ostream& os, const Real& x);

/// Rectangular complex enclosure.
struct Complex {
  Real re;
  Real im;

  explicit Complex(Precision prec = kDefaultPrecision) : re(prec), im(prec) {}
  Complex(Real real_part) : re(std::move(real_part)), im(re.prec()) {}
  Complex(Real real_part, Real imag_part)
      : re(std::move(real_part)), im(std::move(imag_part)) {}

  Precision prec() const { return re.prec() > im.prec() ? re.prec() : im.prec(); }
  bool is_real() const { return im.is_zero(); }
  bool contains_zero() const { return re.contains_zero() && im.contains_zero(); }
  double rad() const { return re.rad() > im.rad() ? re.rad() : im.rad(); }

  Complex operator-() const { return {-re, -im}; }
  Complex& operator+=(const Complex& o);
  Complex& operator-=(const Complex& o);
  Complex& operator*=(const Complex& o);
  Complex& operator/=(const Complex& o);
  friend Complex operator+(Complex a, const Complex& b) { return a += b; }
  friend Complex operator-(Complex a, const Complex& b) { return a -= b; }
  friend Complex operator*(Complex a, const Complex& b) { return a *= b; }
  friend Complex operator/(Complex a, const Complex& b) { return a /= b; }
};

Complex conj(const Complex& z);
Real abs(const Complex& z);
Real abs_squared(const Complex& z);
Complex scale(const Complex& z, const Real& s);

}  // namespace badk
