#include "badk/numberfield.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace badk {

// ---------------------------------------------------------------------------
// IntegerMatrix

IntegerMatrix IntegerMatrix::identity(int n) {
  IntegerMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntegerMatrix IntegerMatrix::transpose() const {
  IntegerMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntegerMatrix operator*(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix shape mismatch");
  IntegerMatrix c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

IntegerMatrix operator+(const IntegerMatrix& a, const IntegerMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix shape mismatch");
  IntegerMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

Integer determinant(const IntegerMatrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("determinant of a non-square matrix");
  if (n == 0) return 1;
  IntegerMatrix a = m;
  Integer prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (a(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(swap, j));
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      for (int j = k + 1; j < n; ++j) {
        Integer v = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
        a(i, j) = v;
      }
      a(i, k) = 0;
    }
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

std::vector<Integer> characteristic_polynomial(const IntegerMatrix& m) {
  // Faddeev-LeVerrier; every division is exact over the integers.
  const int n = m.rows();
  std::vector<Integer> c(n + 1);
  c[n] = 1;
  IntegerMatrix mk(n, n);  // M_0 = 0
  for (int k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    IntegerMatrix next = m * mk;
    for (int i = 0; i < n; ++i) next(i, i) += c[n - k + 1];
    mk = std::move(next);
    IntegerMatrix am = m * mk;
    Integer trace = 0;
    for (int i = 0; i < n; ++i) trace += am(i, i);
    Integer ck = -trace;
    mpz_divexact_ui(ck.get_mpz_t(), ck.get_mpz_t(), static_cast<unsigned long>(k));
    c[n - k] = ck;
  }
  c.pop_back();
  return c;
}

// ---------------------------------------------------------------------------
// MinimalPolynomial

MinimalPolynomial::MinimalPolynomial(std::vector<Integer> coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.empty()) throw std::invalid_argument("minimal polynomial must have degree >= 1");
}

Complex MinimalPolynomial::eval(const Complex& z) const {
  const Precision p = z.prec();
  Complex acc(Real(1, p));
  for (int i = degree() - 1; i >= 0; --i) {
    acc *= z;
    acc += Complex(Real(coeffs_[i], p));
  }
  return acc;
}

Complex MinimalPolynomial::eval_derivative(const Complex& z) const {
  const Precision p = z.prec();
  const int d = degree();
  Complex acc(Real(static_cast<long>(d), p));
  for (int i = d - 1; i >= 1; --i) {
    acc *= z;
    acc += Complex(Real(Integer(coeffs_[i] * i), p));
  }
  return acc;
}

Integer MinimalPolynomial::eval(const Integer& x) const {
  Integer acc = 1;
  for (int i = degree() - 1; i >= 0; --i) acc = acc * x + coeffs_[i];
  return acc;
}

std::string MinimalPolynomial::to_string() const {
  std::ostringstream os;
  const int d = degree();
  os << "x^" << d;
  for (int i = d - 1; i >= 0; --i) {
    if (coeffs_[i] == 0) continue;
    os << (coeffs_[i] < 0 ? " - " : " + ") << abs(coeffs_[i]);
    if (i >= 1) os << "x";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// AlgebraicInteger

AlgebraicInteger AlgebraicInteger::constant(long value, int degree) {
  std::vector<Integer> c(degree);
  c[0] = value;
  return AlgebraicInteger(std::move(c));
}

AlgebraicInteger AlgebraicInteger::basis(int index, int degree) {
  std::vector<Integer> c(degree);
  c[index] = 1;
  return AlgebraicInteger(std::move(c));
}

bool AlgebraicInteger::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Integer& c) { return c == 0; });
}

bool AlgebraicInteger::is_positive_leading() const {
  for (const auto& c : coeffs_)
    if (c != 0) return c > 0;
  return false;
}

AlgebraicInteger AlgebraicInteger::operator-() const {
  AlgebraicInteger r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

AlgebraicInteger& AlgebraicInteger::operator+=(const AlgebraicInteger& o) {
  for (int i = 0; i < degree(); ++i) coeffs_[i] += o.coeffs_[i];
  return *this;
}

AlgebraicInteger& AlgebraicInteger::operator-=(const AlgebraicInteger& o) {
  for (int i = 0; i < degree(); ++i) coeffs_[i] -= o.coeffs_[i];
  return *this;
}

AlgebraicInteger& AlgebraicInteger::operator*=(const Integer& s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

bool operator<(const AlgebraicInteger& a, const AlgebraicInteger& b) {
  return std::lexicographical_compare(a.coeffs_.begin(), a.coeffs_.end(), b.coeffs_.begin(),
                                      b.coeffs_.end());
}

std::string AlgebraicInteger::to_string() const {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < degree(); ++i) os << (i ? "," : "") << coeffs_[i];
  os << "]";
  return os.str();
}

// ---------------------------------------------------------------------------
// Root isolation

namespace {

struct IsolatedRoot {
  Complex center;
  double radius;
  bool real;
};

Real disc_real(const Real& center, double radius, Precision prec) {
  Real r = Real::from_double(radius, prec);
  return Real::hull(center - r, center + r);
}

Complex enclosure_of(const IsolatedRoot& root, Precision prec) {
  if (root.real) return Complex(disc_real(root.center.re, root.radius, prec));
  return {disc_real(root.center.re, root.radius, prec), disc_real(root.center.im, root.radius, prec)};
}

double magnitude(const Complex& z) { return std::hypot(z.re.mid(), z.im.mid()); }

IsolatedRoot refine_root(const MinimalPolynomial& poly, std::complex<double> guess, bool real,
                         Precision prec) {
  Complex z = real ? Complex(Real::from_double(guess.real(), prec))
                   : Complex(Real::from_double(guess.real(), prec), Real::from_double(guess.imag(), prec));
  const double target = std::ldexp(1.0, -static_cast<int>(prec) + 4);
  for (int it = 0; it < 200; ++it) {
    Complex step = poly.eval(z) / poly.eval_derivative(z);
    z -= step;
    z = real ? Complex(z.re.center()) : Complex(z.re.center(), z.im.center());
    if (magnitude(step) <= target * (1.0 + magnitude(z))) break;
  }
  // Every disc |w - z| <= d |p(z)/p'(z)| contains a root.
  Real bound = abs(poly.eval(z)) / abs(poly.eval_derivative(z)) * Real(static_cast<long>(poly.degree()), prec);
  return {std::move(z), bound.upper(), real};
}

}  // namespace

void NumberField::isolate_roots() {
  const int d = degree();
  const Precision prec = precision_;
  std::vector<std::complex<double>> guesses;
  if (d == 1) {
    guesses.push_back(-minpoly_.coeffs()[0].get_d());
  } else {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) companion(i, i + 1) = 1.0;
    for (int j = 0; j < d; ++j) companion(d - 1, j) = -minpoly_.coeffs()[j].get_d();
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw PrecisionError("eigenvalue iteration failed");
    for (int i = 0; i < d; ++i) guesses.push_back(solver.eigenvalues()(i));
  }

  std::vector<IsolatedRoot> reals;
  std::vector<IsolatedRoot> uppers;
  for (const auto& g : guesses) {
    const double scale = std::max(1.0, std::abs(g));
    if (std::abs(g.imag()) <= 1e-7 * scale) {
      reals.push_back(refine_root(minpoly_, g, true, prec));
    } else if (g.imag() > 0) {
      uppers.push_back(refine_root(minpoly_, g, false, prec));
    }
  }
  if (static_cast<int>(reals.size() + 2 * uppers.size()) != d) {
    throw PrecisionError("root count mismatch during isolation of " + minpoly_.to_string());
  }
  std::sort(reals.begin(), reals.end(),
            [](const IsolatedRoot& a, const IsolatedRoot& b) { return a.center.re.mid() > b.center.re.mid(); });
  std::sort(uppers.begin(), uppers.end(), [](const IsolatedRoot& a, const IsolatedRoot& b) {
    if (a.center.re.mid() != b.center.re.mid()) return a.center.re.mid() > b.center.re.mid();
    return a.center.im.mid() > b.center.im.mid();
  });

  // all d discs, conjugates included; pairwise disjoint discs each holding
  // at least one root hold exactly one root each
  std::vector<IsolatedRoot> all = reals;
  for (const auto& u : uppers) {
    all.push_back(u);
    all.push_back({conj(u.center), u.radius, false});
  }
  for (const auto& r : all) {
    const double tol = std::ldexp(std::max(1.0, magnitude(r.center)), -static_cast<int>(prec) / 2);
    if (!(r.radius <= tol)) throw PrecisionError("root enclosure wider than tolerance");
  }
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      Real dist = abs(all[i].center - all[j].center);
      Real reach = Real::from_double(all[i].radius, prec) + Real::from_double(all[j].radius, prec);
      if (!reach.less_than(dist)) throw PrecisionError("root discs are not disjoint");
    }
  }

  places_.clear();
  for (const auto& r : reals) places_.push_back({PlaceKind::real, enclosure_of(r, prec), r.radius});
  for (const auto& u : uppers) places_.push_back({PlaceKind::complex, enclosure_of(u, prec), u.radius});
  real_places_ = static_cast<int>(reals.size());
  complex_places_ = static_cast<int>(uppers.size());

  power_embeddings_.assign(places_.size(), {});
  for (std::size_t k = 0; k < places_.size(); ++k) {
    Complex power(Real(1, prec));
    for (int i = 0; i < d; ++i) {
      power_embeddings_[k].push_back(power);
      power *= places_[k].root;
    }
  }
}

void NumberField::check_irreducible() const {
  const int d = degree();
  if (d == 1) return;
  const Precision prec = precision_;
  std::vector<Complex> roots;
  std::vector<int> partner;  // index of the conjugate root, or self
  for (const auto& pl : places_) {
    if (pl.is_real()) {
      partner.push_back(static_cast<int>(roots.size()));
      roots.push_back(pl.root);
    } else {
      const int i = static_cast<int>(roots.size());
      partner.push_back(i + 1);
      partner.push_back(i);
      roots.push_back(pl.root);
      roots.push_back(conj(pl.root));
    }
  }
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    const int k = std::popcount(mask);
    if (k > d / 2) continue;
    bool closed = true;
    for (int i = 0; i < d && closed; ++i)
      if ((mask >> i & 1u) && !(mask >> partner[i] & 1u)) closed = false;
    if (!closed) continue;
    // coefficients of prod (x - z_i), lowest degree first
    std::vector<Complex> poly{Complex(Real(1, prec))};
    for (int i = 0; i < d; ++i) {
      if (!(mask >> i & 1u)) continue;
      std::vector<Complex> next(poly.size() + 1, Complex(prec));
      for (std::size_t j = 0; j < poly.size(); ++j) {
        next[j + 1] += poly[j];
        next[j] -= poly[j] * roots[i];
      }
      poly = std::move(next);
    }
    std::vector<Integer> factor(k + 1);
    bool candidate = true;
    for (int j = 0; j <= k && candidate; ++j) {
      if (!poly[j].im.contains_zero()) {
        candidate = false;
        break;
      }
      Integer z;
      if (poly[j].re.unique_integer(z)) {
        factor[j] = z;
      } else if (poly[j].re.rad() < 0.25) {
        candidate = false;  // narrow and integer-free
      } else {
        throw PrecisionError("trial factorization undecided");
      }
    }
    if (!candidate) continue;
    // exact division check of the monic factor
    std::vector<Integer> rem(d + 1);
    for (int i = 0; i <= d; ++i) rem[i] = minpoly_.coeff(i);
    for (int top = d; top >= k; --top) {
      Integer q = rem[top];
      if (q == 0) continue;
      for (int j = 0; j <= k; ++j) rem[top - k + j] -= q * factor[j];
    }
    if (std::all_of(rem.begin(), rem.end(), [](const Integer& c) { return c == 0; })) {
      throw std::invalid_argument("minimal polynomial " + minpoly_.to_string() + " is reducible");
    }
  }
}

// ---------------------------------------------------------------------------
// Units

AlgebraicInteger real_quadratic_fundamental_unit(const MinimalPolynomial& minpoly) {
  if (minpoly.degree() != 2) throw std::invalid_argument("not a quadratic polynomial");
  const Integer c0 = minpoly.coeffs()[0];
  const Integer c1 = minpoly.coeffs()[1];
  const Integer disc = c1 * c1 - 4 * c0;
  if (disc <= 0 || mpz_perfect_square_p(disc.get_mpz_t())) {
    throw std::invalid_argument("not a real quadratic field");
  }
  auto norm = [&](const Integer& a, const Integer& b) -> Integer { return a * a - c1 * a * b + c0 * b * b; };
  auto is_unit = [&](const Integer& a, const Integer& b) {
    Integer n = norm(a, b);
    return n == 1 || n == -1;
  };
  const double larger_root = (-c1.get_d() + std::sqrt(disc.get_d())) / 2.0;
  auto normalize = [&](Integer a, Integer b) {
    // b > 0 and a + b*xi > 1 at the larger root
    double v = a.get_d() + b.get_d() * larger_root;
    if (v < 0) {
      a = -a;
      b = -b;
      v = -v;
    }
    if (v < 1.0) {
      // conjugate-inverse: 1/(a + b xi) = +-(a + b xi') = +-(a - c1 b - b xi)
      const Integer n = norm(a, b);
      Integer ia = (a - c1 * b) * n;
      Integer ib = -b * n;
      a = ia;
      b = ib;
      if (a.get_d() + b.get_d() * larger_root < 0) {
        a = -a;
        b = -b;
      }
    }
    return AlgebraicInteger(std::vector<Integer>{a, b});
  };

  // small b by direct search: a^2 - c1 b a + c0 b^2 = +-1
  for (long bl = 1; bl <= 1000; ++bl) {
    const Integer b = bl;
    for (int s : {-1, 1}) {
      Integer rad = disc * b * b + 4 * s;
      if (rad < 0 || !mpz_perfect_square_p(rad.get_mpz_t())) continue;
      Integer root;
      mpz_sqrt(root.get_mpz_t(), rad.get_mpz_t());
      for (const Integer& num : {Integer(c1 * b + root), Integer(c1 * b - root)}) {
        if (mpz_even_p(num.get_mpz_t())) {
          Integer a = num / 2;
          if (is_unit(a, b)) return normalize(a, b);
        }
      }
    }
  }

  // Large units a + b xi have a/b as a convergent of theta = -xi' = (c1 + sqrt(disc)) / 2.
  Integer P = c1, Q = 2;
  const Integer D = disc;
  Integer s;
  mpz_sqrt(s.get_mpz_t(), D.get_mpz_t());
  Integer p_prev = 1, p_prev2 = 0, q_prev = 0, q_prev2 = 1;
  for (int step = 0; step < 200000; ++step) {
    Integer a;
    if (Q > 0) {
      mpz_fdiv_q(a.get_mpz_t(), Integer(P + s).get_mpz_t(), Q.get_mpz_t());
    } else {
      Integer negQ = -Q;
      mpz_fdiv_q(a.get_mpz_t(), Integer(-P - s - 1).get_mpz_t(), negQ.get_mpz_t());
    }
    Integer p = a * p_prev + p_prev2;
    Integer q = a * q_prev + q_prev2;
    if (q > 0 && is_unit(p, q)) return normalize(p, q);
    p_prev2 = p_prev;
    p_prev = p;
    q_prev2 = q_prev;
    q_prev = q;
    P = a * Q - P;
    Q = (D - P * P) / Q;
  }
  throw std::runtime_error("continued fraction did not produce a unit");
}

void NumberField::setup_units(std::optional<std::vector<AlgebraicInteger>> units) {
  const int rank = unit_rank();
  if (units) {
    units_ = std::move(*units);
  } else if (rank == 0) {
    units_.clear();
  } else if (degree() == 2 && real_places_ == 2) {
    units_ = {real_quadratic_fundamental_unit(minpoly_)};
  } else {
    throw std::invalid_argument("field " + minpoly_.to_string() +
                                " needs fundamental units in its configuration");
  }
  if (static_cast<int>(units_.size()) != rank) {
    throw std::invalid_argument("expected " + std::to_string(rank) + " fundamental units, got " +
                                std::to_string(units_.size()));
  }
  unit_logs_.clear();
  for (const auto& u : units_) {
    if (u.degree() != degree()) throw std::invalid_argument("unit has wrong coefficient count");
    if (!is_unit(u)) throw std::invalid_argument("not a unit: " + u.to_string());
    unit_logs_.push_back(unit_log_embedding(u));
  }
  if (rank >= 1) {
    Eigen::MatrixXd logs(rank, rank);
    for (int i = 0; i < rank; ++i)
      for (int j = 0; j < rank; ++j) logs(i, j) = unit_logs_[i][j];
    if (std::abs(logs.determinant()) < 1e-9) {
      throw std::invalid_argument("unit log-embeddings do not span a lattice of full rank");
    }
  }
}

void NumberField::compute_renormalization_constant() {
  const int rank = unit_rank();
  const int n = place_count();
  if (rank == 0) {
    renormalization_constant_ = 1.0;
    return;
  }
  // Sample the fundamental parallelepiped of the unit log lattice, take the
  // sup-norm distance to the nearest lattice point over exponents in
  // [-8, 8]^rank, and add the sampling mesh bound.
  const int window = 8;
  const int grid = rank == 1 ? 64 : rank == 2 ? 24 : rank == 3 ? 8 : 4;
  double mesh = 0.0;
  for (const auto& l : unit_logs_) {
    double m = 0.0;
    for (double v : l) m = std::max(m, std::abs(v));
    mesh += m / (2.0 * grid);
  }
  std::vector<std::vector<double>> offsets;
  {
    std::vector<int> k(rank, -window);
    while (true) {
      std::vector<double> off(n, 0.0);
      for (int i = 0; i < rank; ++i)
        for (int j = 0; j < n; ++j) off[j] += k[i] * unit_logs_[i][j];
      offsets.push_back(std::move(off));
      int i = 0;
      while (i < rank && ++k[i] > window) k[i++] = -window;
      if (i == rank) break;
    }
  }
  double worst = 0.0;
  std::vector<int> g(rank, 0);
  std::vector<double> y(n);
  while (true) {
    std::fill(y.begin(), y.end(), 0.0);
    for (int i = 0; i < rank; ++i) {
      const double theta = (g[i] + 0.5) / grid;
      for (int j = 0; j < n; ++j) y[j] += theta * unit_logs_[i][j];
    }
    double best = std::numeric_limits<double>::infinity();
    for (const auto& off : offsets) {
      double m = 0.0;
      for (int j = 0; j < n && m < best; ++j) m = std::max(m, std::abs(y[j] - off[j]));
      best = std::min(best, m);
    }
    worst = std::max(worst, best);
    int i = 0;
    while (i < rank && ++g[i] >= grid) g[i++] = 0;
    if (i == rank) break;
  }
  renormalization_constant_ = std::exp(worst + mesh);
}

std::vector<long> NumberField::nearest_unit_exponents(const std::vector<double>& target) const {
  const int rank = unit_rank();
  const int n = place_count();
  if (rank == 0) return {};
  Eigen::MatrixXd L(rank, n);
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < n; ++j) L(i, j) = unit_logs_[i][j];
  Eigen::VectorXd y(n);
  for (int j = 0; j < n; ++j) y(j) = target[j];
  // continuous least squares for y + L^T k ~ 0
  Eigen::VectorXd k = (L * L.transpose()).ldlt().solve(-L * y);
  std::vector<long> base(rank);
  for (int i = 0; i < rank; ++i) base[i] = std::lround(k(i));

  const int window = 3;
  std::vector<long> best = base;
  double best_norm = std::numeric_limits<double>::infinity();
  std::vector<int> off(rank, -window);
  while (true) {
    double m = 0.0;
    for (int j = 0; j < n; ++j) {
      double v = y(j);
      for (int i = 0; i < rank; ++i) v += (base[i] + off[i]) * L(i, j);
      m = std::max(m, std::abs(v));
    }
    if (m < best_norm) {
      best_norm = m;
      for (int i = 0; i < rank; ++i) best[i] = base[i] + off[i];
    }
    int i = 0;
    while (i < rank && ++off[i] > window) off[i++] = -window;
    if (i == rank) break;
  }
  return best;
}

AlgebraicInteger NumberField::unit_from_exponents(const std::vector<long>& exponents) const {
  AlgebraicInteger result = one();
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    if (exponents[i] != 0) result = mul(result, unit_pow(units_[i], exponents[i]));
  }
  return result;
}

// ---------------------------------------------------------------------------
// NumberField

NumberField::NumberField(MinimalPolynomial minpoly, std::optional<std::vector<AlgebraicInteger>> units,
                         std::string label, Precision prec)
    : minpoly_(std::move(minpoly)), label_(std::move(label)), precision_(prec) {
  if (label_.empty()) label_ = minpoly_.to_string();
  isolate_roots();
  check_irreducible();
  setup_units(std::move(units));
  compute_renormalization_constant();
}

NumberField NumberField::with_precision(Precision prec) const {
  NumberField f = *this;
  f.precision_ = prec;
  f.isolate_roots();
  return f;
}

AlgebraicInteger NumberField::generator() const {
  if (degree() == 1) return AlgebraicInteger(std::vector<Integer>{-minpoly_.coeffs()[0]});
  return AlgebraicInteger::basis(1, degree());
}

AlgebraicInteger NumberField::mul(const AlgebraicInteger& a, const AlgebraicInteger& b) const {
  const int d = degree();
  std::vector<Integer> prod(2 * d - 1);
  for (int i = 0; i < d; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < d; ++j) prod[i + j] += a[i] * b[j];
  }
  // xi^d = -(c_0 + c_1 xi + ... + c_{d-1} xi^{d-1})
  for (int k = 2 * d - 2; k >= d; --k) {
    if (prod[k] == 0) continue;
    const Integer t = prod[k];
    prod[k] = 0;
    for (int i = 0; i < d; ++i) prod[k - d + i] -= t * minpoly_.coeffs()[i];
  }
  prod.resize(d);
  return AlgebraicInteger(std::move(prod));
}

AlgebraicInteger NumberField::pow(const AlgebraicInteger& a, unsigned long n) const {
  AlgebraicInteger result = one();
  AlgebraicInteger base = a;
  while (n > 0) {
    if (n & 1UL) result = mul(result, base);
    n >>= 1;
    if (n > 0) base = mul(base, base);
  }
  return result;
}

AlgebraicInteger NumberField::unit_pow(const AlgebraicInteger& u, long k) const {
  if (k >= 0) return pow(u, static_cast<unsigned long>(k));
  return pow(inverse_unit(u), static_cast<unsigned long>(-k));
}

AlgebraicInteger NumberField::inverse_unit(const AlgebraicInteger& u) const {
  // solve T_u c = e_0 over the rationals; the solution is integral for units
  const int d = degree();
  IntegerMatrix t = multiplication_matrix(u);
  std::vector<std::vector<Rational>> a(d, std::vector<Rational>(d + 1));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a[i][j] = t(i, j);
    a[i][d] = i == 0 ? 1 : 0;
  }
  for (int col = 0; col < d; ++col) {
    int pivot = -1;
    for (int i = col; i < d; ++i)
      if (a[i][col] != 0) {
        pivot = i;
        break;
      }
    if (pivot < 0) throw std::invalid_argument("element is not invertible");
    std::swap(a[col], a[pivot]);
    for (int i = 0; i < d; ++i) {
      if (i == col || a[i][col] == 0) continue;
      Rational f = a[i][col] / a[col][col];
      for (int j = col; j <= d; ++j) a[i][j] -= f * a[col][j];
    }
  }
  std::vector<Integer> c(d);
  for (int i = 0; i < d; ++i) {
    Rational v = a[i][d] / a[i][i];
    v.canonicalize();
    if (v.get_den() != 1) throw std::invalid_argument("not a unit: " + u.to_string());
    c[i] = v.get_num();
  }
  return AlgebraicInteger(std::move(c));
}

IntegerMatrix NumberField::multiplication_matrix(const AlgebraicInteger& a) const {
  const int d = degree();
  IntegerMatrix m(d, d);
  AlgebraicInteger column = a;
  const AlgebraicInteger xi = generator();
  for (int j = 0; j < d; ++j) {
    for (int i = 0; i < d; ++i) m(i, j) = column[i];
    if (j + 1 < d) column = mul(column, xi);
  }
  return m;
}

Integer NumberField::norm(const AlgebraicInteger& a) const { return determinant(multiplication_matrix(a)); }

bool NumberField::is_unit(const AlgebraicInteger& a) const {
  const Integer n = norm(a);
  return n == 1 || n == -1;
}

Complex NumberField::embed(const AlgebraicInteger& a, int place_index) const {
  const auto& powers = power_embeddings_[place_index];
  Complex acc(Real(a[0], precision_));
  for (int i = 1; i < degree(); ++i) {
    if (a[i] == 0) continue;
    const Real c(a[i], precision_);
    acc += scale(powers[i], c);
  }
  return acc;
}

std::vector<Complex> NumberField::tau(const AlgebraicInteger& a) const {
  std::vector<Complex> out;
  out.reserve(places_.size());
  for (int k = 0; k < place_count(); ++k) out.push_back(embed(a, k));
  return out;
}

std::vector<std::complex<double>> NumberField::conjugates() const {
  std::vector<std::complex<double>> out;
  for (const auto& pl : places_) {
    std::complex<double> z(pl.root.re.mid(), pl.root.im.mid());
    out.push_back(z);
    if (!pl.is_real()) out.push_back(std::conj(z));
  }
  return out;
}

std::vector<std::complex<double>> NumberField::all_embeddings(const AlgebraicInteger& a) const {
  std::vector<std::complex<double>> out;
  for (int k = 0; k < place_count(); ++k) {
    Complex v = embed(a, k);
    std::complex<double> z(v.re.mid(), v.im.mid());
    out.push_back(z);
    if (!places_[k].is_real()) out.push_back(std::conj(z));
  }
  return out;
}

std::vector<double> NumberField::unit_log_embedding(const AlgebraicInteger& u) const {
  if (!is_unit(u)) throw std::invalid_argument("not a unit: " + u.to_string());
  std::vector<double> out;
  for (int k = 0; k < place_count(); ++k) out.push_back(log(abs(embed(u, k))).mid());
  return out;
}

Real NumberField::product_formula(const AlgebraicInteger& u) const {
  Real acc(1, precision_);
  for (int k = 0; k < place_count(); ++k) {
    Complex v = embed(u, k);
    acc *= places_[k].is_real() ? abs(v) : abs_squared(v);
  }
  return acc;
}

double NumberField::vandermonde_residual(const AlgebraicInteger& a) const {
  const int d = degree();
  const auto lambda = conjugates();
  const auto sig = all_embeddings(a);
  Eigen::MatrixXcd v(d, d);
  for (int j = 0; j < d; ++j) {
    std::complex<double> p = 1.0;
    for (int i = 0; i < d; ++i) {
      v(i, j) = p;
      p *= lambda[j];
    }
  }
  const IntegerMatrix m = multiplication_matrix(a);
  Eigen::MatrixXcd t(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) t(i, j) = m(j, i).get_d();
  Eigen::MatrixXcd diag = v.partialPivLu().solve(t * v);
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const std::complex<double> expected = i == j ? sig[i] : std::complex<double>(0.0);
      worst = std::max(worst, std::abs(diag(i, j) - expected));
    }
  return worst;
}

NumberField parse_field(const std::vector<long>& minpoly,
                        const std::optional<std::vector<std::vector<long>>>& units, std::string label,
                        Precision prec) {
  std::vector<Integer> coeffs(minpoly.begin(), minpoly.end());
  MinimalPolynomial p(std::move(coeffs));
  std::optional<std::vector<AlgebraicInteger>> us;
  if (units) {
    us.emplace();
    for (const auto& u : *units) {
      if (static_cast<int>(u.size()) != p.degree()) {
        throw std::invalid_argument("unit coefficient vector must have length equal to the degree");
      }
      us->emplace_back(std::vector<Integer>(u.begin(), u.end()));
    }
  }
  return NumberField(std::move(p), std::move(us), std::move(label), prec);
}

}  // namespace badk
