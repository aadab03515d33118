// Exact arithmetic in K = Q(xi), its ring of integers Z[xi], certified
// Galois embeddings and unit data.
#pragma once

#include "badk/real.hpp"

#include <gmpxx.h>

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace badk {

using Integer = mpz_class;
using Rational = mpq_class;

/// Dense row-major integer matrix.
class IntegerMatrix {
 public:
  IntegerMatrix() = default;
  IntegerMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  static IntegerMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Integer& operator()(int i, int j) { return data_[i * cols_ + j]; }
  const Integer& operator()(int i, int j) const { return data_[i * cols_ + j]; }

  IntegerMatrix transpose() const;
  friend IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b);
  friend IntegerMatrix operator+(const IntegerMatrix& a, const IntegerMatrix& b);
  friend bool operator==(const IntegerMatrix& a, const IntegerMatrix& b) = default;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Integer> data_;
};

// Exact determinant (fraction-free Bareiss elimination).
Integer determinant(const IntegerMatrix& m);
// Coefficients c_0..c_{n-1} of the monic characteristic polynomial det(xI - m).
std::vector<Integer> characteristic_polynomial(const IntegerMatrix& m);

/// Monic x^d + c_{d-1} x^{d-1} + ... + c_0 with integer coefficients.
class MinimalPolynomial {
 public:
  MinimalPolynomial() = default;
  // lower coefficients c_0..c_{d-1}; the leading 1 is implicit
  explicit MinimalPolynomial(std::vector<Integer> coeffs);

  int degree() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<Integer>& coeffs() const { return coeffs_; }
  // c_i for 0 <= i <= d, with c_d = 1
  Integer coeff(int i) const { return i == degree() ? Integer(1) : coeffs_[i]; }

  Complex eval(const Complex& z) const;
  Complex eval_derivative(const Complex& z) const;
  Integer eval(const Integer& x) const;
  std::string to_string() const;

 private:
  std::vector<Integer> coeffs_;
};

enum class PlaceKind { real, complex };

/// One archimedean place: a root of the minimal polynomial with a
/// certified enclosure. Complex places keep the upper half-plane root.
struct Place {
  PlaceKind kind = PlaceKind::real;
  Complex root;
  // radius of a disc around the enclosure center that contains exactly
  // one root of the minimal polynomial
  double isolation_radius = 0.0;

  bool is_real() const { return kind == PlaceKind::real; }
  // exponent e_sigma of the normalized absolute value
  int exponent() const { return is_real() ? 1 : 2; }
};

/// Element of Z[xi] in the power basis {1, xi, ..., xi^{d-1}}.
class AlgebraicInteger {
 public:
  AlgebraicInteger() = default;
  explicit AlgebraicInteger(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) {}
  static AlgebraicInteger constant(long value, int degree);
  static AlgebraicInteger basis(int index, int degree);

  int degree() const { return static_cast<int>(coeffs_.size()); }
  const std::vector<Integer>& coeffs() const { return coeffs_; }
  const Integer& operator[](int i) const { return coeffs_[i]; }
  Integer& operator[](int i) { return coeffs_[i]; }
  bool is_zero() const;
  // first nonzero coefficient is positive
  bool is_positive_leading() const;

  AlgebraicInteger operator-() const;
  AlgebraicInteger& operator+=(const AlgebraicInteger& o);
  AlgebraicInteger& operator-=(const AlgebraicInteger& o);
  AlgebraicInteger& operator*=(const Integer& s);
  friend AlgebraicInteger operator+(AlgebraicInteger a, const AlgebraicInteger& b) { return a += b; }
  friend AlgebraicInteger operator-(AlgebraicInteger a, const AlgebraicInteger& b) { return a -= b; }
  friend AlgebraicInteger operator*(AlgebraicInteger a, const Integer& s) { return a *= s; }
  friend bool operator==(const AlgebraicInteger& a, const AlgebraicInteger& b) = default;
  // lexicographic on coefficients
  friend bool operator<(const AlgebraicInteger& a, const AlgebraicInteger& b);

  std::string to_string() const;

 private:
  std::vector<Integer> coeffs_;
};

class NumberField {
 public:
  // Validates irreducibility, isolates the roots and sets up the unit
  // group. Units may be omitted for degree 1, imaginary quadratic fields
  // and real quadratic fields (computed by continued fractions).
  NumberField(MinimalPolynomial minpoly, std::optional<std::vector<AlgebraicInteger>> units,
              std::string label = {}, Precision prec = kDefaultPrecision);

  // Same field with places re-isolated at another working precision.
  NumberField with_precision(Precision prec) const;

  const MinimalPolynomial& minpoly() const { return minpoly_; }
  const std::string& label() const { return label_; }
  int degree() const { return minpoly_.degree(); }
  int real_places() const { return real_places_; }
  int complex_places() const { return complex_places_; }
  int place_count() const { return static_cast<int>(places_.size()); }
  int unit_rank() const { return place_count() - 1; }
  Precision precision() const { return precision_; }
  const std::vector<Place>& places() const { return places_; }
  const Place& place(int i) const { return places_[i]; }
  const std::vector<AlgebraicInteger>& units() const { return units_; }

  AlgebraicInteger zero() const { return AlgebraicInteger::constant(0, degree()); }
  AlgebraicInteger one() const { return AlgebraicInteger::constant(1, degree()); }
  AlgebraicInteger from_int(long v) const { return AlgebraicInteger::constant(v, degree()); }
  AlgebraicInteger generator() const;

  AlgebraicInteger mul(const AlgebraicInteger& a, const AlgebraicInteger& b) const;
  AlgebraicInteger add(const AlgebraicInteger& a, const AlgebraicInteger& b) const { return a + b; }
  AlgebraicInteger pow(const AlgebraicInteger& a, unsigned long n) const;
  // u^k for any integer k; u must be a unit
  AlgebraicInteger unit_pow(const AlgebraicInteger& u, long k) const;
  AlgebraicInteger inverse_unit(const AlgebraicInteger& u) const;
  Integer norm(const AlgebraicInteger& a) const;
  bool is_unit(const AlgebraicInteger& a) const;

  // Left multiplication by a; column j holds the coordinates of a*xi^j.
  IntegerMatrix multiplication_matrix(const AlgebraicInteger& a) const;

  Complex embed(const AlgebraicInteger& a, int place_index) const;
  std::vector<Complex> tau(const AlgebraicInteger& a) const;
  // sigma(a) for all d complex embeddings, conjugates included, as doubles
  std::vector<std::complex<double>> all_embeddings(const AlgebraicInteger& a) const;
  // all d roots of the minimal polynomial as doubles, in the same order
  std::vector<std::complex<double>> conjugates() const;

  // (log |sigma(u)|)_sigma
  std::vector<double> unit_log_embedding(const AlgebraicInteger& u) const;
  // product over places of |sigma(u)|^{e_sigma}, as an enclosure
  Real product_formula(const AlgebraicInteger& u) const;

  // Constant C with C^{-1} H^{1/d} <= ||xi v|| <= C H^{1/d} for a suitable
  // unit xi; C = exp(sup-norm covering radius bound of the unit log lattice).
  double renormalization_constant() const { return renormalization_constant_; }
  // unit exponents (one per stored unit) bringing the log vector y as close
  // to zero as possible in sup norm
  std::vector<long> nearest_unit_exponents(const std::vector<double>& target) const;
  AlgebraicInteger unit_from_exponents(const std::vector<long>& exponents) const;

  // max entrywise |V^{-1} T_a V - diag(sigma(a))| with V the Vandermonde
  // matrix of the conjugates and T_a the row-action multiplication matrix
  double vandermonde_residual(const AlgebraicInteger& a) const;

 private:
  void isolate_roots();
  void check_irreducible() const;
  void setup_units(std::optional<std::vector<AlgebraicInteger>> units);
  void compute_renormalization_constant();

  MinimalPolynomial minpoly_;
  std::string label_;
  Precision precision_;
  std::vector<Place> places_;
  int real_places_ = 0;
  int complex_places_ = 0;
  std::vector<AlgebraicInteger> units_;
  std::vector<std::vector<double>> unit_logs_;
  double renormalization_constant_ = 1.0;
  // sigma(xi^i) per place, for fast embedding
  std::vector<std::vector<Complex>> power_embeddings_;
};

// Fundamental unit of Z[xi] for a real quadratic minimal polynomial
// x^2 + c1 x + c0, via the continued fraction of the conjugate root.
// Normalized so that it is > 1 at the larger real root.
AlgebraicInteger real_quadratic_fundamental_unit(const MinimalPolynomial& minpoly);

NumberField parse_field(const std::vector<long>& minpoly,
                        const std::optional<std::vector<std::vector<long>>>& units,
                        std::string label = {}, Precision prec = kDefaultPrecision);

}  // namespace badk
