// Rank-2 O_K-modules tau(O_K^2) g inside K_S^2: heights, diagonal flows,
// short vector enumeration, unit renormalization and K-span tests.
#pragma once

#include "badk/numberfield.hpp"
#include "badk/real.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace badk {

/// [[a, b], [c, d]] over the completion at one place; acts on row vectors.
struct PlaceMatrix {
  Complex a, b, c, d;

  static PlaceMatrix identity(Precision prec);
  static PlaceMatrix diagonal(Complex first, Complex second);
  static PlaceMatrix upper_unipotent(Complex offdiag);

  Complex determinant() const { return a * d - b * c; }
  friend PlaceMatrix operator*(const PlaceMatrix& x, const PlaceMatrix& y);
};

/// Element of SL_2(K_S): one 2x2 matrix per place.
class GroupElement {
 public:
  GroupElement() = default;
  explicit GroupElement(std::vector<PlaceMatrix> blocks) : blocks_(std::move(blocks)) {}
  static GroupElement identity(const NumberField& field);

  int place_count() const { return static_cast<int>(blocks_.size()); }
  const PlaceMatrix& at(int place) const { return blocks_[place]; }
  PlaceMatrix& at(int place) { return blocks_[place]; }

  friend GroupElement operator*(const GroupElement& x, const GroupElement& y);

  // every per-place determinant encloses 1 up to tol
  bool is_special(double tol = 1e-20) const;

 private:
  std::vector<PlaceMatrix> blocks_;
};

/// Per-place values (x^sigma)_sigma of a point of K_S.
using PointKS = std::vector<Complex>;

/// The component (v_1^sigma, v_2^sigma) of a vector of K_S^2 at one place.
struct PlaceVector {
  Complex first;
  Complex second;
};

/// tau(a, b) g together with its integral coordinates (a, b) in O_K^2.
struct ModuleVector {
  AlgebraicInteger a;
  AlgebraicInteger b;
  std::vector<PlaceVector> embedded;

  bool is_zero() const { return a.is_zero() && b.is_zero(); }
};

ModuleVector make_module_vector(const NumberField& field, AlgebraicInteger a, AlgebraicInteger b,
                                const GroupElement& g);
// right action of g on an already embedded vector; integral part unchanged
ModuleVector act(const ModuleVector& v, const GroupElement& g);

// H(v) = prod_sigma ||v^sigma||^{e_sigma} with the sup norm at each place
Real height(const NumberField& field, const ModuleVector& v);
Real place_norm(const PlaceVector& v);
// sup over places of ||v^sigma||
Real sup_norm(const ModuleVector& v);
// prod_sigma |det(v^sigma; w^sigma)|^{e_sigma}
Real determinant_product(const NumberField& field, const ModuleVector& v, const ModuleVector& w);

/// Weights r_sigma of the diagonal flow g(r)_t = diag(e^{-r t}, e^{r t}).
class FlowSpec {
 public:
  // r_sigma = 1 at every place, the unweighted flow g_t
  static FlowSpec equal(int places);
  // nonnegative weights summing to exactly one
  static FlowSpec weighted(std::vector<Rational> weights);

  int place_count() const { return static_cast<int>(weights_.size()); }
  const std::vector<Rational>& weights() const { return weights_; }
  const Rational& weight(int place) const { return weights_[place]; }
  bool is_equal_weight() const { return equal_; }
  Rational max_weight() const;
  // first place attaining the maximal weight
  int fastest_place() const;

 private:
  std::vector<Rational> weights_;
  bool equal_ = true;
};

GroupElement flow_element(const FlowSpec& spec, const Real& t);
GroupElement unipotent(const PointKS& curve_value);
// g(r)_{t}^{-1} Phi(delta) g(r)_{t}
GroupElement conjugated_unipotent(const FlowSpec& spec, const Real& t, const PointKS& delta);

/// Integral basis (rows (a_k, b_k) of O_K^2) of the full module.
struct IntegralBasis {
  std::vector<AlgebraicInteger> a;
  std::vector<AlgebraicInteger> b;

  static IntegralBasis standard(const NumberField& field);
  int size() const { return static_cast<int>(a.size()); }
};

// Real coordinates of tau(a, b) g in R^{2d}: (v1, v2) per real place and
// (Re v1, Im v1, Re v2, Im v2) per complex place.
Eigen::VectorXd realify(const NumberField& field, const ModuleVector& v);

// Rows are the realified images of the 2d generators (xi^i, 0), (0, xi^i).
Eigen::MatrixXd restriction_matrix(const NumberField& field, const GroupElement& g);

// LLL-reduces the realified module (delta = 0.99), recomputing floating
// coordinates from the exact integral rows between passes.
IntegralBasis reduce_basis(const NumberField& field, const GroupElement& g,
                           const IntegralBasis* warm_start = nullptr);

enum class EnumerationMode {
  // exhaustive integer box on the power-basis coordinates of a and b
  box,
  // Fincke-Pohst on an LLL-reduced basis with a radius large enough to
  // contain a unit multiple of every vector below the height bound
  reduced,
};

struct EnumerationOptions {
  EnumerationMode mode = EnumerationMode::box;
  // box mode: bound on the power-basis coefficients of a and b
  long coeff_box = 3;
  // reduced mode: cap on the coefficients with respect to the reduced basis
  long reduced_cap = 64;
  const IntegralBasis* warm_start = nullptr;
};

struct ShortVector {
  ModuleVector vector;
  Real height;
};

struct ShortVectorList {
  std::vector<ShortVector> vectors;  // sorted by (height, integral part)
  // every unit orbit of vectors below the bound is represented: in box mode
  // when the box covers the coefficient bound implied by g, in reduced mode
  // when no branch hit the coefficient cap
  bool certified = false;
  // candidates whose height enclosure straddles the bound; they are left out
  int undecided = 0;
  std::optional<IntegralBasis> basis;
};

// All enumerated nonzero vectors with H(v) < bound.
ShortVectorList shortest_vectors(const NumberField& field, const GroupElement& g, double bound,
                                 const EnumerationOptions& options = {});

// Height bound for listing short vectors given the systole s: 1, or 2s when
// s >= 1/2; once s < 2^{-d} every K-independent vector has height
// >= 2^{-d} / s > 1, so the list shrinks to the multiples below 4s.
double short_list_bound(const NumberField& field, double systole);

struct Systole {
  Real height;
  ModuleVector achiever;
  // sup norm of the unit-renormalized achiever, within a factor C of
  // height^{1/d}
  Real min_norm;
  bool certified = false;
  std::optional<IntegralBasis> basis;
};

Systole systole(const NumberField& field, const GroupElement& g, const EnumerationOptions& options = {});

struct ProfilePoint {
  double t;
  Systole systole;
};

std::vector<ProfilePoint> trajectory_profile(const NumberField& field, const GroupElement& g,
                                             const FlowSpec& spec, const std::vector<double>& t_grid,
                                             const EnumerationOptions& options = {});

// K v == K w, decided exactly from the integral parts: a1 b2 - b1 a2 == 0.
bool kspan_equal(const NumberField& field, const ModuleVector& v, const ModuleVector& w);

struct Renormalized {
  AlgebraicInteger unit;
  ModuleVector vector;
};

// Multiplies v by a unit so that ||xi v|| lies in [C^{-1} H^{1/d}, C H^{1/d}].
Renormalized unit_renormalize(const NumberField& field, const ModuleVector& v);

// scalar multiple c * v for c in O_K (integral and embedded parts)
ModuleVector scale(const NumberField& field, const AlgebraicInteger& c, const ModuleVector& v);

}  // namespace badk
