#include "badk/latticeflow.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <stdexcept>

namespace badk {

namespace {

using LongMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using LongVector = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

std::complex<double> to_double(const Complex& z) { return {z.re.mid(), z.im.mid()}; }

bool integral_less(const ModuleVector& x, const ModuleVector& y) {
  if (x.a == y.a) return x.b < y.b;
  return x.a < y.a;
}

void sort_short(std::vector<ShortVector>& list) {
  std::sort(list.begin(), list.end(), [](const ShortVector& x, const ShortVector& y) {
    const double hx = x.height.mid();
    const double hy = y.height.mid();
    if (hx != hy) return hx < hy;
    return integral_less(x.vector, y.vector);
  });
}

// Lower bound on the height from floating coordinates with per-coordinate
// absolute slack; used only to discard candidates before certification.
double height_lower_bound(const NumberField& field, const std::vector<std::complex<double>>& v1,
                          const std::vector<std::complex<double>>& v2, const std::vector<double>& slack) {
  double h = 1.0;
  for (int s = 0; s < field.place_count(); ++s) {
    double m = std::max(std::abs(v1[s]), std::abs(v2[s])) - slack[s];
    if (m <= 0.0) return 0.0;
    h *= field.place(s).is_real() ? m : m * m;
  }
  return h;
}

struct GramSchmidt {
  LongMatrix mu;
  LongVector norms;  // squared lengths of the orthogonalized rows
};

GramSchmidt gram_schmidt(const LongMatrix& b) {
  const int n = static_cast<int>(b.rows());
  GramSchmidt gs{LongMatrix::Zero(n, n), LongVector::Zero(n)};
  LongMatrix star = b;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      gs.mu(i, j) = b.row(i).dot(star.row(j)) / gs.norms(j);
      star.row(i) -= gs.mu(i, j) * star.row(j);
    }
    gs.norms(i) = star.row(i).squaredNorm();
    gs.mu(i, i) = 1;
  }
  return gs;
}

std::vector<Real> exact_row(const NumberField& field, const GroupElement& g, const AlgebraicInteger& a,
                            const AlgebraicInteger& b) {
  const ModuleVector v = make_module_vector(field, a, b, g);
  std::vector<Real> out;
  for (int s = 0; s < field.place_count(); ++s) {
    const PlaceVector& p = v.embedded[s];
    out.push_back(p.first.re.center());
    if (!field.place(s).is_real()) out.push_back(p.first.im.center());
    out.push_back(p.second.re.center());
    if (!field.place(s).is_real()) out.push_back(p.second.im.center());
  }
  return out;
}

Real dot(const std::vector<Real>& x, const std::vector<Real>& y) {
  Real acc(x.front().prec());
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

LongVector realified_row(const NumberField& field, const GroupElement& g, const AlgebraicInteger& a,
                         const AlgebraicInteger& b) {
  return realify(field, make_module_vector(field, a, b, g)).cast<long double>();
}

// Upper bound on the power-basis coefficients of (a, b) for any vector
// tau(a, b) g whose sup norm is at most radius.
double coefficient_bound(const NumberField& field, const GroupElement& g, double radius) {
  double image = 0.0;
  for (int s = 0; s < field.place_count(); ++s) {
    const PlaceMatrix& m = g.at(s);
    // inverse of an SL_2 block is its adjugate
    const double c0 = std::abs(to_double(m.d)) + std::abs(to_double(m.c));
    const double c1 = std::abs(to_double(m.b)) + std::abs(to_double(m.a));
    image = std::max(image, radius * std::max(c0, c1));
  }
  const auto roots = field.conjugates();
  const int d = field.degree();
  Eigen::MatrixXcd w(d, d);
  for (int s = 0; s < d; ++s) {
    std::complex<double> p = 1.0;
    for (int i = 0; i < d; ++i) {
      w(s, i) = p;
      p *= roots[s];
    }
  }
  const Eigen::MatrixXcd inv = w.inverse();
  double row_sum = 0.0;
  for (int i = 0; i < d; ++i) row_sum = std::max(row_sum, inv.row(i).cwiseAbs().sum());
  return row_sum * image * (1.0 + 1e-9);
}

ShortVectorList enumerate_box(const NumberField& field, const GroupElement& g, double bound, long box) {
  const int d = field.degree();
  const int places = field.place_count();

  std::vector<std::vector<std::complex<double>>> powers(places);
  std::vector<double> power_scale(places, 0.0);
  for (int s = 0; s < places; ++s) {
    for (int i = 0; i < d; ++i) {
      powers[s].push_back(to_double(field.embed(AlgebraicInteger::basis(i, d), s)));
      power_scale[s] += std::abs(powers[s].back());
    }
  }
  std::vector<std::array<std::complex<double>, 4>> gm(places);
  std::vector<double> slack(places);
  for (int s = 0; s < places; ++s) {
    const PlaceMatrix& m = g.at(s);
    gm[s] = {to_double(m.a), to_double(m.b), to_double(m.c), to_double(m.d)};
    double entries = 0.0;
    for (const auto& e : gm[s]) entries = std::max(entries, std::abs(e));
    slack[s] = 1e-12 * (1.0 + 2.0 * box * power_scale[s] * entries);
  }

  ShortVectorList out;
  std::vector<long> coeff(2 * d, -box);
  std::vector<std::complex<double>> v1(places), v2(places);
  while (true) {
    bool nonzero = false;
    for (long c : coeff) nonzero = nonzero || c != 0;
    if (nonzero) {
      for (int s = 0; s < places; ++s) {
        std::complex<double> sa = 0.0, sb = 0.0;
        for (int i = 0; i < d; ++i) {
          sa += static_cast<double>(coeff[i]) * powers[s][i];
          sb += static_cast<double>(coeff[d + i]) * powers[s][i];
        }
        v1[s] = sa * gm[s][0] + sb * gm[s][2];
        v2[s] = sa * gm[s][1] + sb * gm[s][3];
      }
      if (height_lower_bound(field, v1, v2, slack) < bound) {
        std::vector<Integer> ca(d), cb(d);
        for (int i = 0; i < d; ++i) {
          ca[i] = coeff[i];
          cb[i] = coeff[d + i];
        }
        ModuleVector v = make_module_vector(field, AlgebraicInteger(ca), AlgebraicInteger(cb), g);
        Real h = height(field, v);
        if (h.upper() < bound)
          out.vectors.push_back({std::move(v), std::move(h)});
        else if (h.lower() < bound)
          ++out.undecided;
      }
    }
    int i = 0;
    while (i < 2 * d && ++coeff[i] > box) coeff[i++] = -box;
    if (i == 2 * d) break;
  }
  const double radius = field.renormalization_constant() * std::pow(bound, 1.0 / d);
  out.certified = coefficient_bound(field, g, radius) <= static_cast<double>(box);
  sort_short(out.vectors);
  return out;
}

ShortVectorList enumerate_reduced(const NumberField& field, const GroupElement& g, double bound,
                                  const EnumerationOptions& options) {
  const int d = field.degree();
  const int n = 2 * d;
  const int places = field.place_count();

  IntegralBasis basis = reduce_basis(field, g, options.warm_start);
  LongMatrix rows(n, n);
  for (int k = 0; k < n; ++k) rows.row(k) = realified_row(field, g, basis.a[k], basis.b[k]);
  const GramSchmidt gs = gram_schmidt(rows);

  const double sup_radius = field.renormalization_constant() * std::pow(bound, 1.0 / d);
  const long double radius2 =
      static_cast<long double>(places) * 2.0L * sup_radius * sup_radius * (1.0L + 1e-6L);

  std::vector<long double> row_scale(n);
  for (int k = 0; k < n; ++k) row_scale[k] = rows.row(k).cwiseAbs().maxCoeff();

  ShortVectorList out;
  out.certified = true;
  std::vector<long> x(n, 0);

  auto emit = [&]() {
    bool nonzero = false;
    for (long c : x) nonzero = nonzero || c != 0;
    if (!nonzero) return;
    LongVector y = LongVector::Zero(n);
    long double scale = 0.0L;
    for (int k = 0; k < n; ++k) {
      if (x[k] == 0) continue;
      y += static_cast<long double>(x[k]) * rows.row(k).transpose();
      scale += std::abs(static_cast<long double>(x[k])) * row_scale[k];
    }
    std::vector<std::complex<double>> v1(places), v2(places);
    std::vector<double> slack(places, static_cast<double>(1e-12L * (1.0L + scale)));
    int pos = 0;
    for (int s = 0; s < places; ++s) {
      if (field.place(s).is_real()) {
        v1[s] = static_cast<double>(y(pos));
        v2[s] = static_cast<double>(y(pos + 1));
        pos += 2;
      } else {
        v1[s] = {static_cast<double>(y(pos)), static_cast<double>(y(pos + 1))};
        v2[s] = {static_cast<double>(y(pos + 2)), static_cast<double>(y(pos + 3))};
        pos += 4;
      }
    }
    if (height_lower_bound(field, v1, v2, slack) >= bound) return;
    AlgebraicInteger a = field.zero(), b = field.zero();
    for (int k = 0; k < n; ++k) {
      if (x[k] == 0) continue;
      a += basis.a[k] * Integer(x[k]);
      b += basis.b[k] * Integer(x[k]);
    }
    ModuleVector v = make_module_vector(field, std::move(a), std::move(b), g);
    Real h = height(field, v);
    if (h.upper() < bound)
      out.vectors.push_back({std::move(v), std::move(h)});
    else if (h.lower() < bound)
      ++out.undecided;
  };

  const long cap = options.reduced_cap;
  std::function<void(int, long double)> descend = [&](int level, long double partial) {
    long double center = 0.0L;
    for (int j = level + 1; j < n; ++j) center -= gs.mu(j, level) * x[j];
    const long double remaining = radius2 - partial;
    if (remaining < 0.0L) return;
    const long double r = std::sqrt(remaining / gs.norms(level));
    long lo = static_cast<long>(std::ceil(center - r));
    long hi = static_cast<long>(std::floor(center + r));
    if (lo < -cap) {
      lo = -cap;
      out.certified = false;
    }
    if (hi > cap) {
      hi = cap;
      out.certified = false;
    }
    for (long c = lo; c <= hi; ++c) {
      x[level] = c;
      const long double diff = c - center;
      const long double next = partial + gs.norms(level) * diff * diff;
      if (next > radius2) continue;
      if (level == 0)
        emit();
      else
        descend(level - 1, next);
    }
    x[level] = 0;
  };
  descend(n - 1, 0.0L);

  sort_short(out.vectors);
  out.basis = std::move(basis);
  return out;
}

}  // namespace

PlaceMatrix PlaceMatrix::identity(Precision prec) {
  return {Complex(Real(1, prec)), Complex(prec), Complex(prec), Complex(Real(1, prec))};
}

PlaceMatrix PlaceMatrix::diagonal(Complex first, Complex second) {
  const Precision prec = first.prec();
  return {std::move(first), Complex(prec), Complex(prec), std::move(second)};
}

PlaceMatrix PlaceMatrix::upper_unipotent(Complex offdiag) {
  const Precision prec = offdiag.prec();
  return {Complex(Real(1, prec)), std::move(offdiag), Complex(prec), Complex(Real(1, prec))};
}

PlaceMatrix operator*(const PlaceMatrix& x, const PlaceMatrix& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

GroupElement GroupElement::identity(const NumberField& field) {
  return GroupElement(std::vector<PlaceMatrix>(field.place_count(), PlaceMatrix::identity(field.precision())));
}

GroupElement operator*(const GroupElement& x, const GroupElement& y) {
  if (x.place_count() != y.place_count()) throw std::invalid_argument("group elements over different place sets");
  std::vector<PlaceMatrix> blocks;
  blocks.reserve(x.place_count());
  for (int s = 0; s < x.place_count(); ++s) blocks.push_back(x.at(s) * y.at(s));
  return GroupElement(std::move(blocks));
}

bool GroupElement::is_special(double tol) const {
  for (const auto& m : blocks_) {
    const Complex det = m.determinant();
    const Real one(1, det.prec());
    const Real slack = Real::interval(-tol, tol, det.prec());
    if (!(det.re + slack).contains(one) || !(det.im + slack).contains_zero()) return false;
  }
  return true;
}

ModuleVector make_module_vector(const NumberField& field, AlgebraicInteger a, AlgebraicInteger b,
                                const GroupElement& g) {
  if (g.place_count() != field.place_count()) throw std::invalid_argument("group element arity mismatch");
  ModuleVector v;
  v.embedded.reserve(field.place_count());
  for (int s = 0; s < field.place_count(); ++s) {
    const Complex sa = field.embed(a, s);
    const Complex sb = field.embed(b, s);
    const PlaceMatrix& m = g.at(s);
    v.embedded.push_back({sa * m.a + sb * m.c, sa * m.b + sb * m.d});
  }
  v.a = std::move(a);
  v.b = std::move(b);
  return v;
}

ModuleVector act(const ModuleVector& v, const GroupElement& g) {
  ModuleVector out{v.a, v.b, {}};
  out.embedded.reserve(v.embedded.size());
  for (std::size_t s = 0; s < v.embedded.size(); ++s) {
    const PlaceVector& p = v.embedded[s];
    const PlaceMatrix& m = g.at(static_cast<int>(s));
    out.embedded.push_back({p.first * m.a + p.second * m.c, p.first * m.b + p.second * m.d});
  }
  return out;
}

Real place_norm(const PlaceVector& v) { return max(abs(v.first), abs(v.second)); }

Real height(const NumberField& field, const ModuleVector& v) {
  Real h(1, field.precision());
  for (int s = 0; s < field.place_count(); ++s) {
    const Real n = place_norm(v.embedded[s]);
    h *= field.place(s).is_real() ? n : sqr(n);
  }
  return h;
}

Real sup_norm(const ModuleVector& v) {
  Real m = place_norm(v.embedded.front());
  for (std::size_t s = 1; s < v.embedded.size(); ++s) m = max(m, place_norm(v.embedded[s]));
  return m;
}

Real determinant_product(const NumberField& field, const ModuleVector& v, const ModuleVector& w) {
  Real p(1, field.precision());
  for (int s = 0; s < field.place_count(); ++s) {
    const PlaceVector& x = v.embedded[s];
    const PlaceVector& y = w.embedded[s];
    const Real det = abs(x.first * y.second - x.second * y.first);
    p *= field.place(s).is_real() ? det : sqr(det);
  }
  return p;
}

FlowSpec FlowSpec::equal(int places) {
  FlowSpec spec;
  spec.weights_.assign(places, Rational(1));
  spec.equal_ = true;
  return spec;
}

FlowSpec FlowSpec::weighted(std::vector<Rational> weights) {
  if (weights.empty()) throw std::invalid_argument("flow weights must not be empty");
  Rational total = 0;
  for (const auto& r : weights) {
    if (r < 0) throw std::invalid_argument("flow weights must be nonnegative");
    total += r;
  }
  if (total != 1) throw std::invalid_argument("flow weights must sum to 1, got " + total.get_str());
  FlowSpec spec;
  spec.weights_ = std::move(weights);
  spec.equal_ = false;
  return spec;
}

Rational FlowSpec::max_weight() const { return *std::max_element(weights_.begin(), weights_.end()); }

int FlowSpec::fastest_place() const {
  return static_cast<int>(std::max_element(weights_.begin(), weights_.end()) - weights_.begin());
}

GroupElement flow_element(const FlowSpec& spec, const Real& t) {
  std::vector<PlaceMatrix> blocks;
  for (const auto& r : spec.weights()) {
    const Real rt = Real(r, t.prec()) * t;
    blocks.push_back(PlaceMatrix::diagonal(Complex(exp(-rt)), Complex(exp(rt))));
  }
  return GroupElement(std::move(blocks));
}

GroupElement unipotent(const PointKS& curve_value) {
  std::vector<PlaceMatrix> blocks;
  for (const auto& x : curve_value) blocks.push_back(PlaceMatrix::upper_unipotent(x));
  return GroupElement(std::move(blocks));
}

GroupElement conjugated_unipotent(const FlowSpec& spec, const Real& t, const PointKS& delta) {
  if (static_cast<int>(delta.size()) != spec.place_count()) throw std::invalid_argument("curve value arity mismatch");
  std::vector<PlaceMatrix> blocks;
  for (int s = 0; s < spec.place_count(); ++s) {
    const Real two_rt = Real(Rational(spec.weight(s) * 2), t.prec()) * t;
    blocks.push_back(PlaceMatrix::upper_unipotent(scale(delta[s], exp(two_rt))));
  }
  return GroupElement(std::move(blocks));
}

IntegralBasis IntegralBasis::standard(const NumberField& field) {
  const int d = field.degree();
  IntegralBasis basis;
  for (int i = 0; i < d; ++i) {
    basis.a.push_back(AlgebraicInteger::basis(i, d));
    basis.b.push_back(field.zero());
  }
  for (int i = 0; i < d; ++i) {
    basis.a.push_back(field.zero());
    basis.b.push_back(AlgebraicInteger::basis(i, d));
  }
  return basis;
}

Eigen::VectorXd realify(const NumberField& field, const ModuleVector& v) {
  std::vector<double> coords;
  for (int s = 0; s < field.place_count(); ++s) {
    const PlaceVector& p = v.embedded[s];
    const bool real = field.place(s).is_real();
    coords.push_back(p.first.re.mid());
    if (!real) coords.push_back(p.first.im.mid());
    coords.push_back(p.second.re.mid());
    if (!real) coords.push_back(p.second.im.mid());
  }
  return Eigen::Map<Eigen::VectorXd>(coords.data(), static_cast<Eigen::Index>(coords.size()));
}

Eigen::MatrixXd restriction_matrix(const NumberField& field, const GroupElement& g) {
  const IntegralBasis basis = IntegralBasis::standard(field);
  const int n = basis.size();
  Eigen::MatrixXd m(n, n);
  for (int k = 0; k < n; ++k) {
    ModuleVector v = make_module_vector(field, basis.a[k], basis.b[k], g);
    m.row(k) = realify(field, v).transpose();
  }
  return m;
}

IntegralBasis reduce_basis(const NumberField& field, const GroupElement& g, const IntegralBasis* warm_start) {
  IntegralBasis basis = warm_start ? *warm_start : IntegralBasis::standard(field);
  const int n = basis.size();
  const Precision prec = field.precision();
  const Real delta = Real::from_double(0.99, prec);
  const long max_steps = 200000;

  // Gram-Schmidt runs on MPFR midpoints: rows of Phi(x) g_t can span many
  // more orders of magnitude than a long double resolves.
  std::vector<std::vector<Real>> rows(n);
  auto load = [&](int k) { rows[k] = exact_row(field, g, basis.a[k], basis.b[k]); };
  for (int k = 0; k < n; ++k) load(k);
  std::vector<std::vector<Real>> mu(n, std::vector<Real>(n, Real(prec)));
  std::vector<Real> norms(n, Real(prec));
  auto orthogonalize = [&]() {
    std::vector<std::vector<Real>> star = rows;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < i; ++j) {
        mu[i][j] = (dot(rows[i], star[j]) / norms[j]).center();
        for (int c = 0; c < n; ++c) star[i][c] = (star[i][c] - mu[i][j] * star[j][c]).center();
      }
      norms[i] = dot(star[i], star[i]).center();
      if (!norms[i].certainly_positive()) throw PrecisionError("degenerate basis during lattice reduction");
    }
  };

  orthogonalize();
  long steps = 0;
  int k = 1;
  while (k < n) {
    if (++steps > max_steps) throw std::runtime_error("lattice reduction did not terminate");
    bool reduced_row = false;
    for (int j = k - 1; j >= 0; --j) {
      if (std::abs(mu[k][j].mid()) <= 0.51) continue;
      const Integer q = mu[k][j].round_mid();
      const Real qr(q, prec);
      basis.a[k] -= basis.a[j] * q;
      basis.b[k] -= basis.b[j] * q;
      for (int i = 0; i < j; ++i) mu[k][i] = (mu[k][i] - qr * mu[j][i]).center();
      mu[k][j] = (mu[k][j] - qr).center();
      reduced_row = true;
    }
    if (reduced_row) {
      load(k);
      orthogonalize();
    }
    const Real lhs = norms[k] - (delta - sqr(mu[k][k - 1])) * norms[k - 1];
    if (lhs.mid() >= 0.0) {
      ++k;
    } else {
      std::swap(basis.a[k], basis.a[k - 1]);
      std::swap(basis.b[k], basis.b[k - 1]);
      std::swap(rows[k], rows[k - 1]);
      orthogonalize();
      k = std::max(k - 1, 1);
    }
  }
  return basis;
}

ShortVectorList shortest_vectors(const NumberField& field, const GroupElement& g, double bound,
                                 const EnumerationOptions& options) {
  if (!(bound > 0.0)) throw std::invalid_argument("height bound must be positive");
  if (options.mode == EnumerationMode::box) {
    if (options.coeff_box < 1) throw std::invalid_argument("coefficient box must be at least 1");
    return enumerate_box(field, g, bound, options.coeff_box);
  }
  return enumerate_reduced(field, g, bound, options);
}

double short_list_bound(const NumberField& field, double systole) {
  if (systole < std::ldexp(1.0, -field.degree())) return 4.0 * systole;
  return std::max(1.0, 2.0 * systole);
}

Systole systole(const NumberField& field, const GroupElement& g, const EnumerationOptions& options) {
  // any nonzero vector gives an upper bound; the first reduced row is short
  double bound = 0.0;
  std::optional<IntegralBasis> basis;
  if (options.mode == EnumerationMode::reduced) {
    basis = reduce_basis(field, g, options.warm_start);
    bound = std::numeric_limits<double>::infinity();
    for (int k = 0; k < basis->size(); ++k)
      bound = std::min(bound, height(field, make_module_vector(field, basis->a[k], basis->b[k], g)).upper());
  } else {
    const IntegralBasis standard = IntegralBasis::standard(field);
    bound = std::numeric_limits<double>::infinity();
    for (int k = 0; k < standard.size(); ++k)
      bound = std::min(bound, height(field, make_module_vector(field, standard.a[k], standard.b[k], g)).upper());
  }
  bound = bound * (1.0 + 1e-6) + std::numeric_limits<double>::min();

  EnumerationOptions opts = options;
  if (basis) opts.warm_start = &*basis;
  ShortVectorList list = shortest_vectors(field, g, bound, opts);
  if (list.vectors.empty()) throw PrecisionError("systole search found no vector below its own upper bound");

  const ShortVector& best = list.vectors.front();
  Renormalized r = unit_renormalize(field, best.vector);
  return {best.height, best.vector, sup_norm(r.vector), list.certified, std::move(list.basis)};
}

std::vector<ProfilePoint> trajectory_profile(const NumberField& field, const GroupElement& g, const FlowSpec& spec,
                                             const std::vector<double>& t_grid, const EnumerationOptions& options) {
  for (std::size_t i = 1; i < t_grid.size(); ++i)
    if (!(t_grid[i] > t_grid[i - 1])) throw std::invalid_argument("time grid must be increasing");
  std::vector<ProfilePoint> out;
  std::optional<IntegralBasis> warm;
  for (double t : t_grid) {
    const GroupElement h = g * flow_element(spec, Real::from_double(t, field.precision()));
    EnumerationOptions opts = options;
    if (warm) opts.warm_start = &*warm;
    Systole s = systole(field, h, opts);
    warm = s.basis;
    out.push_back({t, std::move(s)});
  }
  return out;
}

bool kspan_equal(const NumberField& field, const ModuleVector& v, const ModuleVector& w) {
  return (field.mul(v.a, w.b) - field.mul(v.b, w.a)).is_zero();
}

ModuleVector scale(const NumberField& field, const AlgebraicInteger& c, const ModuleVector& v) {
  ModuleVector out{field.mul(c, v.a), field.mul(c, v.b), {}};
  for (int s = 0; s < field.place_count(); ++s) {
    const Complex sc = field.embed(c, s);
    out.embedded.push_back({sc * v.embedded[s].first, sc * v.embedded[s].second});
  }
  return out;
}

Renormalized unit_renormalize(const NumberField& field, const ModuleVector& v) {
  const Real h = height(field, v);
  if (h.contains_zero()) throw PrecisionError("height enclosure touches zero");
  if (field.unit_rank() == 0) return {field.one(), v};
  const double log_h = log(h).mid() / field.degree();
  std::vector<double> y(field.place_count());
  for (int s = 0; s < field.place_count(); ++s) y[s] = log(place_norm(v.embedded[s])).mid() - log_h;
  const AlgebraicInteger unit = field.unit_from_exponents(field.nearest_unit_exponents(y));
  ModuleVector scaled = scale(field, unit, v);

  const double c = field.renormalization_constant();
  const double root = std::exp(log_h);
  const Real norm = sup_norm(scaled);
  if (norm.upper() > c * root * (1.0 + 1e-9) || norm.lower() < root / c * (1.0 - 1e-9))
    throw std::runtime_error("unit search exhausted: renormalized norm " + norm.to_string(6) +
                             " outside [C^-1 H^(1/d), C H^(1/d)] with C = " + std::to_string(c));
  return {unit, std::move(scaled)};
}

}  // namespace badk
