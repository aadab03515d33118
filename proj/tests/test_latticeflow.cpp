#include "badk/latticeflow.hpp"

#include "doctest.h"
#include "fields.hpp"

#include <cmath>
#include <random>

using namespace badk;
using testing_fields::alg;

namespace {

const Precision P = kDefaultPrecision;

Real real(double x) { return Real::from_double(x, P); }

ModuleVector vec(const NumberField& k, std::vector<long> a, std::vector<long> b, const GroupElement& g) {
  return make_module_vector(k, alg(std::move(a)), alg(std::move(b)), g);
}

ModuleVector vec(const NumberField& k, std::vector<long> a, std::vector<long> b) {
  return vec(k, std::move(a), std::move(b), GroupElement::identity(k));
}

// [[1,u],[0,1]] [[1,0],[l,1]] diag(e^s, e^-s) at every place
GroupElement random_g(const NumberField& k, std::mt19937_64& rng, double spread) {
  std::uniform_real_distribution<double> u(-spread, spread);
  std::vector<PlaceMatrix> blocks;
  for (int s = 0; s < k.place_count(); ++s) {
    Complex up(real(u(rng)), k.place(s).is_real() ? Real(P) : real(u(rng)));
    Complex low(real(u(rng)), k.place(s).is_real() ? Real(P) : real(u(rng)));
    const Real e = real(0.4 * u(rng));
    PlaceMatrix lower{Complex(Real(1, P)), Complex(P), low, Complex(Real(1, P))};
    blocks.push_back(PlaceMatrix::upper_unipotent(up) * lower *
                     PlaceMatrix::diagonal(Complex(exp(e)), Complex(exp(-e))));
  }
  return GroupElement(std::move(blocks));
}

double op_norm(const GroupElement& g) {
  double m = 0.0;
  for (int s = 0; s < g.place_count(); ++s) {
    const PlaceMatrix& x = g.at(s);
    Eigen::Matrix2cd a;
    a << std::complex<double>(x.a.re.mid(), x.a.im.mid()), std::complex<double>(x.b.re.mid(), x.b.im.mid()),
        std::complex<double>(x.c.re.mid(), x.c.im.mid()), std::complex<double>(x.d.re.mid(), x.d.im.mid());
    m = std::max(m, Eigen::JacobiSVD<Eigen::Matrix2cd>(a).singularValues()(0));
  }
  return m;
}

// independent brute force over the same coefficient box with plain doubles
double brute_systole_sqrt2(const double g[2][4], long box) {
  const double roots[2] = {std::sqrt(2.0), -std::sqrt(2.0)};
  double best = INFINITY;
  for (long a0 = -box; a0 <= box; ++a0)
    for (long a1 = -box; a1 <= box; ++a1)
      for (long b0 = -box; b0 <= box; ++b0)
        for (long b1 = -box; b1 <= box; ++b1) {
          if (!a0 && !a1 && !b0 && !b1) continue;
          double h = 1.0;
          for (int s = 0; s < 2; ++s) {
            const double sa = a0 + a1 * roots[s], sb = b0 + b1 * roots[s];
            const double v1 = sa * g[s][0] + sb * g[s][2];
            const double v2 = sa * g[s][1] + sb * g[s][3];
            h *= std::max(std::abs(v1), std::abs(v2));
          }
          best = std::min(best, h);
        }
  return best;
}

}  // namespace

TEST_CASE("height examples") {
  NumberField k = testing_fields::sqrt2();
  CHECK(height(k, vec(k, {1, 0}, {1, 0})).contains(1.0));
  CHECK(height(k, vec(k, {0, 1}, {0, 0})).contains(2.0));
  const GroupElement g = flow_element(FlowSpec::equal(2), log(Real(2, P)));
  const Real h = height(k, vec(k, {1, 0}, {0, 0}, g));
  CHECK(h.contains(0.25));
  CHECK(h.rad() < 1e-30);
  // H(tau(a, 0)) = |N(a)|
  for (long x = -4; x <= 4; ++x)
    for (long y = -4; y <= 4; ++y) {
      if (!x && !y) continue;
      const double n = std::abs(double(x * x - 2 * y * y));
      CHECK(height(k, vec(k, {x, y}, {0, 0})).contains(n));
    }
}

TEST_CASE("height at a complex place uses exponent 2") {
  NumberField k = testing_fields::gaussian();
  // |1 + 2i|^2 = 5 = N(1 + 2i)
  CHECK(height(k, vec(k, {1, 2}, {0, 0})).contains(5.0));
  NumberField c = testing_fields::pure_cubic();
  // N(1 + cbrt2) = 1 + 2 = 3
  CHECK(height(c, vec(c, {1, 1, 0}, {0, 0, 0})).contains(3.0));
}

TEST_CASE("flow elements") {
  const GroupElement id = flow_element(FlowSpec::equal(2), Real(P));
  for (int s = 0; s < 2; ++s) {
    CHECK(id.at(s).a.re.contains(1.0));
    CHECK(id.at(s).d.re.contains(1.0));
    CHECK(id.at(s).b.re.is_zero());
  }
  const Real t = Real(2, P) * log(Real(2, P));
  const GroupElement half = flow_element(FlowSpec::weighted({Rational(1, 2), Rational(1, 2)}), t);
  for (int s = 0; s < 2; ++s) {
    CHECK(half.at(s).a.re.contains(0.5));
    CHECK(half.at(s).d.re.contains(2.0));
  }
  const GroupElement w = flow_element(FlowSpec::weighted({Rational(2, 3), Rational(1, 3)}), Real(3, P));
  CHECK(w.at(0).a.re.contains(exp(Real(-2, P))));
  CHECK(w.at(0).d.re.contains(exp(Real(2, P))));
  CHECK(w.at(1).a.re.contains(exp(Real(-1, P))));
  CHECK(w.at(1).d.re.contains(exp(Real(1, P))));
  CHECK(w.is_special());
}

TEST_CASE("flow weights are validated") {
  CHECK_THROWS_AS(FlowSpec::weighted({Rational(1, 2), Rational(1, 3)}), std::invalid_argument);
  CHECK_THROWS_AS(FlowSpec::weighted({Rational(3, 2), Rational(-1, 2)}), std::invalid_argument);
  const FlowSpec f = FlowSpec::weighted({Rational(1, 3), Rational(2, 3)});
  CHECK(f.fastest_place() == 1);
  CHECK(f.max_weight() == Rational(2, 3));
  CHECK(FlowSpec::equal(3).is_equal_weight());
}

TEST_CASE("unipotent and conjugated unipotent") {
  NumberField k = testing_fields::sqrt2();
  const PointKS zero(2, Complex(P));
  const GroupElement id = unipotent(zero);
  CHECK(id.at(0).b.re.is_zero());
  const PointKS x{Complex(real(0.3)), Complex(real(0.3))};
  const PointKS y{Complex(real(-0.7)), Complex(real(-0.7))};
  const PointKS sum{Complex(real(0.3) + real(-0.7)), Complex(real(0.3) + real(-0.7))};
  const GroupElement prod = unipotent(x) * unipotent(y);
  for (int s = 0; s < 2; ++s) CHECK(prod.at(s).b.re.overlaps(unipotent(sum).at(s).b.re));

  const FlowSpec eq = FlowSpec::equal(2);
  const GroupElement c0 = conjugated_unipotent(eq, Real(P), x);
  CHECK(c0.at(1).b.re.contains(real(0.3)));
  CHECK(conjugated_unipotent(eq, real(5.0), zero).at(0).b.re.is_zero());
  // e^{2 t_n} = 1 / (rho (alpha beta)^n) for t_n = log(1 / (rho (alpha beta)^n)) / 2
  const Real r = Real(Rational(1, 8 * 8 * 8), P);
  const Real tn = log(Real(1, P) / r) / Real(2, P);
  const GroupElement cn = conjugated_unipotent(eq, tn, PointKS{Complex(r), Complex(r)});
  CHECK(cn.at(0).b.re.contains(1.0));

  // the definition: g_t^{-1} Phi(x) g_t
  const Real t = real(0.8);
  const GroupElement lhs = flow_element(eq, -t) * unipotent(x) * flow_element(eq, t);
  const GroupElement rhs = conjugated_unipotent(eq, t, x);
  for (int s = 0; s < 2; ++s) CHECK(lhs.at(s).b.re.overlaps(rhs.at(s).b.re));
  (void)k;
}

TEST_CASE("shortest vectors and systole at the identity") {
  NumberField k = testing_fields::sqrt2();
  const GroupElement id = GroupElement::identity(k);
  EnumerationOptions box3{EnumerationMode::box, 3};
  CHECK(shortest_vectors(k, id, 0.99, box3).vectors.empty());

  const double g[2][4] = {{1, 0, 0, 1}, {1, 0, 0, 1}};
  const double oracle = brute_systole_sqrt2(g, 3);
  CHECK(oracle == doctest::Approx(1.0));
  const Systole s = systole(k, id, box3);
  CHECK(s.height.mid() == doctest::Approx(oracle));
  CHECK(height(k, s.achiever).contains(1.0));
  // tau(1, 0) is among the minimizers
  bool found = false;
  for (const auto& v : shortest_vectors(k, id, 1.01, box3).vectors)
    found = found || (v.vector.a == alg({1, 0}) && v.vector.b == alg({0, 0}));
  CHECK(found);

  const GroupElement gt = flow_element(FlowSpec::equal(2), log(Real(2, P)));
  const ShortVectorList list = shortest_vectors(k, gt, 0.5, box3);
  REQUIRE(!list.vectors.empty());
  CHECK(list.vectors.front().height.contains(0.25));
  CHECK(systole(k, gt, box3).height.contains(0.25));
}

TEST_CASE("shortest vectors: cubic counterexample closed form") {
  NumberField k = testing_fields::cubic();
  const double t = 3.0, x = 0.5;
  const PointKS phi{Complex(P), Complex(P), Complex(real(x))};
  const GroupElement g = unipotent(phi) * flow_element(FlowSpec::equal(3), real(t));
  const double closed = std::exp(-2 * t) * std::max(std::exp(-t), std::exp(t) * x);
  CHECK(closed == doctest::Approx(0.0249).epsilon(1e-3));
  EnumerationOptions red{EnumerationMode::reduced};
  const ShortVectorList list = shortest_vectors(k, g, 0.05, red);
  bool found = false;
  // reduced enumeration is complete up to units: look for a unit multiple of tau(1, 0)
  for (const auto& v : list.vectors)
    if (k.is_unit(v.vector.a) && v.vector.b.is_zero()) {
      found = true;
      CHECK(v.height.mid() == doctest::Approx(closed).epsilon(1e-12));
    }
  CHECK(found);
  CHECK(list.certified);
}

TEST_CASE("trajectory profile examples") {
  NumberField k = testing_fields::sqrt2();
  const FlowSpec eq = FlowSpec::equal(2);
  // x = tau(sqrt2): second coordinate of tau(1, -sqrt2) Phi(x) vanishes
  const PointKS x{k.embed(alg({0, 1}), 0), k.embed(alg({0, 1}), 1)};
  const std::vector<double> grid{0.0, 1.0, 2.0};
  const auto prof = trajectory_profile(k, unipotent(x), eq, grid, {EnumerationMode::reduced});
  REQUIRE(prof.size() == 3);
  CHECK(prof[2].systole.height.upper() <= std::exp(-4.0) * (1 + 1e-12));
  const ModuleVector v = vec(k, {1, 0}, {0, -1}, unipotent(x) * flow_element(eq, real(2.0)));
  CHECK(height(k, v).mid() == doctest::Approx(std::exp(-4.0)));

  // x = 0: tau(1, 0) decays like e^{-2t}
  const PointKS zero(2, Complex(P));
  const auto flat = trajectory_profile(k, unipotent(zero), eq, {0.0, 0.5, 1.0, 1.5}, {EnumerationMode::reduced});
  for (const auto& p : flat) CHECK(p.systole.height.mid() == doctest::Approx(std::exp(-2 * p.t)));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  const double r = u(rng);
  const PointKS rand{Complex(real(r)), Complex(real(r * 0.37))};
  for (const auto& p : trajectory_profile(k, unipotent(rand), eq, {0, 1, 2, 3, 4}, {EnumerationMode::reduced}))
    CHECK(p.systole.height.certainly_positive());

  CHECK_THROWS_AS(trajectory_profile(k, unipotent(rand), eq, {1.0, 0.5}), std::invalid_argument);
}

TEST_CASE("kspan_equal") {
  NumberField k = testing_fields::sqrt2();
  CHECK(kspan_equal(k, vec(k, {1, 0}, {2, 0}), vec(k, {2, 0}, {4, 0})));
  CHECK_FALSE(kspan_equal(k, vec(k, {1, 0}, {0, 0}), vec(k, {0, 0}, {1, 0})));
  CHECK(kspan_equal(k, vec(k, {1, 0}, {0, 1}), vec(k, {0, 1}, {2, 0})));
}

TEST_CASE("unit renormalization examples") {
  NumberField k = testing_fields::sqrt2();
  const Renormalized r1 = unit_renormalize(k, vec(k, {1, 1}, {0, 0}));
  CHECK(r1.unit == alg({-1, 1}));
  CHECK(r1.vector.a == alg({1, 0}));
  CHECK(sup_norm(r1.vector).contains(1.0));

  const Renormalized r0 = unit_renormalize(k, vec(k, {1, 0}, {0, 0}));
  CHECK(r0.unit == alg({1, 0}));

  const Renormalized r3 = unit_renormalize(k, vec(k, {7, 5}, {0, 0}));
  CHECK(r3.unit == k.unit_pow(alg({-1, 1}), 3));
  CHECK(r3.vector.a == alg({1, 0}));
}

TEST_CASE("restriction matrix") {
  NumberField k = testing_fields::sqrt2();
  const Eigen::MatrixXd m = restriction_matrix(k, GroupElement::identity(k));
  const double r2 = std::sqrt(2.0);
  // rows (1,0), (xi,0), (0,1), (0,xi); columns (v1, v2) at each place
  Eigen::Matrix4d expected;
  expected << 1, 0, 1, 0, r2, 0, -r2, 0, 0, 1, 0, 1, 0, r2, 0, -r2;
  CHECK((m - expected).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(std::abs(m.determinant()) - 8.0) < 1e-12);

  const GroupElement gt = flow_element(FlowSpec::equal(2), real(1.7));
  CHECK(std::abs(restriction_matrix(k, gt).determinant() - m.determinant()) < 1e-9);

  NumberField q = testing_fields::rationals();
  const Eigen::MatrixXd mq = restriction_matrix(q, GroupElement::identity(q));
  CHECK(mq.rows() == 2);
  CHECK((mq - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("property: restriction determinant is invariant under the flow") {
  for (const NumberField& k : {testing_fields::sqrt2(), testing_fields::cubic(), testing_fields::pure_cubic()}) {
    std::mt19937_64 rng(11);
    const GroupElement g = random_g(k, rng, 0.7);
    const double base = restriction_matrix(k, g).determinant();
    for (double t : {-2.0, 0.5, 3.0}) {
      const double moved = restriction_matrix(k, g * flow_element(FlowSpec::equal(k.place_count()), real(t))).determinant();
      CHECK(std::abs(moved - base) < 1e-8 * std::abs(base));
    }
  }
}

TEST_CASE("property: unit invariance of the height") {
  std::mt19937_64 rng(2024);
  for (const NumberField& k : {testing_fields::sqrt2(), testing_fields::cubic(), testing_fields::pure_cubic()}) {
    const GroupElement g = random_g(k, rng, 0.7);
    for (int i = 0; i < 500; ++i) {
      const AlgebraicInteger a = testing_fields::random_element(rng, k.degree(), 5);
      const AlgebraicInteger b = testing_fields::random_element(rng, k.degree(), 5);
      if (a.is_zero() && b.is_zero()) continue;
      const ModuleVector v = make_module_vector(k, a, b, g);
      const Real h = height(k, v);
      for (const auto& u : k.units()) {
        const Real hu = height(k, make_module_vector(k, k.mul(u, a), k.mul(u, b), g));
        CHECK(hu.overlaps(h));
      }
    }
  }
}

TEST_CASE("property: heights of nonzero vectors are certified positive") {
  std::mt19937_64 rng(99);
  for (const NumberField& k : {testing_fields::sqrt2(), testing_fields::gaussian(), testing_fields::pure_cubic()}) {
    for (int i = 0; i < 200; ++i) {
      const GroupElement g = random_g(k, rng, 1.0);
      const AlgebraicInteger a = testing_fields::random_element(rng, k.degree(), 3);
      const AlgebraicInteger b = testing_fields::random_element(rng, k.degree(), 3);
      if (a.is_zero() && b.is_zero()) continue;
      CHECK(height(k, make_module_vector(k, a, b, g)).certainly_positive());
    }
  }
}

TEST_CASE("property: two vectors with H(v)H(w) < 2^-d span the same K-line") {
  NumberField k = testing_fields::sqrt2();
  std::mt19937_64 rng(5);
  int pairs = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const GroupElement g = random_g(k, rng, 0.7);
    CHECK(op_norm(g) <= 4.0);
    const Systole s = systole(k, g, {EnumerationMode::box, 3});
    const auto list = shortest_vectors(k, g, 1.0 / s.height.lower(), {EnumerationMode::box, 3}).vectors;
    for (std::size_t i = 0; i < list.size(); ++i)
      for (std::size_t j = i + 1; j < list.size(); ++j) {
        const Real prod = list[i].height * list[j].height;
        // |det| <= 2 ||v|| ||w|| at each place for the sup norm
        CHECK(determinant_product(k, list[i].vector, list[j].vector).lower() <= 4.0 * prod.upper());
        if (prod.upper() < 0.25) {
          ++pairs;
          CHECK(kspan_equal(k, list[i].vector, list[j].vector));
        }
      }
  }
  CHECK(pairs > 0);
}

TEST_CASE("the threshold H(v)H(w) < 1 is not enough for the sup norm") {
  NumberField k = testing_fields::sqrt2();
  const Real c = sqrt(Real(2, P)) / Real(2, P);
  const PlaceMatrix rot{Complex(c), Complex(c), Complex(-c), Complex(c)};
  const GroupElement g(std::vector<PlaceMatrix>{rot, rot});
  CHECK(g.is_special(1e-30));
  const ModuleVector v = vec(k, {1, 0}, {0, 0}, g);
  const ModuleVector w = vec(k, {0, 0}, {1, 0}, g);
  CHECK((height(k, v) * height(k, w)).upper() < 0.26);
  CHECK_FALSE(kspan_equal(k, v, w));
}

TEST_CASE("property: determinant product is the norm of a1 b2 - b1 a2") {
  std::mt19937_64 rng(17);
  for (const NumberField& k : {testing_fields::sqrt2(), testing_fields::cubic(), testing_fields::pure_cubic()}) {
    const GroupElement g = random_g(k, rng, 0.7);
    for (int i = 0; i < 200; ++i) {
      const auto v = make_module_vector(k, testing_fields::random_element(rng, k.degree(), 4),
                                        testing_fields::random_element(rng, k.degree(), 4), g);
      const auto w = make_module_vector(k, testing_fields::random_element(rng, k.degree(), 4),
                                        testing_fields::random_element(rng, k.degree(), 4), g);
      const Integer n = k.norm(k.mul(v.a, w.b) - k.mul(v.b, w.a));
      CHECK(determinant_product(k, v, w).contains(Real(Integer(abs(n)), P)));
    }
  }
}

TEST_CASE("property: flow is a one-parameter group") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  NumberField k = testing_fields::pure_cubic();
  for (const FlowSpec& spec : {FlowSpec::equal(2), FlowSpec::weighted({Rational(2, 3), Rational(1, 3)})}) {
    for (int i = 0; i < 50; ++i) {
      const Real s = real(u(rng)), t = real(u(rng));
      const auto v = make_module_vector(k, testing_fields::random_element(rng, 3, 3) + k.one(),
                                        testing_fields::random_element(rng, 3, 3), random_g(k, rng, 0.5));
      const Real lhs = height(k, act(act(v, flow_element(spec, s)), flow_element(spec, t)));
      const Real rhs = height(k, act(v, flow_element(spec, s + t)));
      CHECK(lhs.overlaps(rhs));
    }
  }
}

TEST_CASE("property: renormalized norm lies within C of H^{1/d}") {
  std::mt19937_64 rng(41);
  for (const NumberField& k : {testing_fields::sqrt2(), testing_fields::cubic(), testing_fields::pure_cubic()}) {
    const double c = k.renormalization_constant();
    for (int i = 0; i < 200; ++i) {
      const GroupElement g = random_g(k, rng, 1.0);
      AlgebraicInteger a = testing_fields::random_element(rng, k.degree(), 6);
      if (a.is_zero()) a = k.one();
      // push far from balance with a large unit power first
      const AlgebraicInteger u = k.unit_pow(k.units()[0], (i % 21) - 10);
      const ModuleVector v = make_module_vector(k, k.mul(u, a), k.mul(u, testing_fields::random_element(rng, k.degree(), 6)), g);
      const Renormalized r = unit_renormalize(k, v);
      CHECK(k.is_unit(r.unit));
      const double root = std::pow(height(k, v).mid(), 1.0 / k.degree());
      const double n = sup_norm(r.vector).mid();
      CHECK(n <= c * root * (1 + 1e-9));
      CHECK(n >= root / c * (1 - 1e-9));
    }
  }
}

TEST_CASE("reduced enumeration agrees with an exhaustive box") {
  std::mt19937_64 rng(8);
  for (const NumberField& k : {testing_fields::sqrt2(), testing_fields::gaussian()}) {
    for (int trial = 0; trial < 20; ++trial) {
      const GroupElement g = random_g(k, rng, 0.7);
      const Systole box = systole(k, g, {EnumerationMode::box, 4});
      const Systole red = systole(k, g, {EnumerationMode::reduced});
      CHECK(red.certified);
      CHECK(red.height.overlaps(box.height));
    }
  }
  // independent double-precision oracle for Q(sqrt2)
  NumberField k = testing_fields::sqrt2();
  for (int trial = 0; trial < 5; ++trial) {
    const GroupElement g = random_g(k, rng, 0.7);
    double gd[2][4];
    for (int s = 0; s < 2; ++s) {
      gd[s][0] = g.at(s).a.re.mid();
      gd[s][1] = g.at(s).b.re.mid();
      gd[s][2] = g.at(s).c.re.mid();
      gd[s][3] = g.at(s).d.re.mid();
    }
    CHECK(systole(k, g, {EnumerationMode::reduced}).height.mid() == doctest::Approx(brute_systole_sqrt2(gd, 4)));
  }
}

TEST_CASE("reduced enumeration stays certified deep into the flow") {
  NumberField k = testing_fields::cubic();
  const PointKS phi{Complex(real(0.1)), Complex(real(-0.2)), Complex(real(0.3))};
  std::vector<double> grid;
  for (double t = 0; t <= 8.0; t += 0.5) grid.push_back(t);
  const auto prof = trajectory_profile(k, unipotent(phi), FlowSpec::equal(3), grid, {EnumerationMode::reduced});
  for (const auto& p : prof) {
    CHECK(p.systole.certified);
    CHECK(p.systole.height.certainly_positive());
  }
}

TEST_CASE("cold reduction deep into the flow matches the warm-started profile") {
  NumberField k = testing_fields::sqrt2();
  const PointKS x{Complex(real(0.318)), Complex(real(-0.611))};
  const FlowSpec eq = FlowSpec::equal(2);
  std::vector<double> grid;
  for (double t = 0; t <= 25.0; t += 0.5) grid.push_back(t);
  const auto prof = trajectory_profile(k, unipotent(x), eq, grid, {EnumerationMode::reduced});
  const Systole cold = systole(k, unipotent(x) * flow_element(eq, real(25.0)), {EnumerationMode::reduced});
  CHECK(cold.certified);
  CHECK(cold.height.overlaps(prof.back().systole.height));
}
