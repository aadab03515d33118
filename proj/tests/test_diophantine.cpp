#include "badk/diophantine.hpp"

#include "doctest.h"
#include "fields.hpp"

#include <cmath>
#include <random>

using namespace badk;
using testing_fields::alg;

namespace {

const Precision P = kDefaultPrecision;

Real real(double x) { return Real::from_double(x, P); }

// min over 1 <= q <= Q of q * dist(q x, Z), straight from the definition
long double classical_min(long double x, long qmax, long qmin = 1) {
  long double best = INFINITY;
  for (long q = qmin; q <= qmax; ++q) {
    const long double qx = q * x;
    best = std::min(best, q * std::fabs(qx - std::nearbyint(qx)));
  }
  return best;
}

// continued-fraction convergent denominators of x up to qmax
std::vector<long> convergent_denominators(long double x, long qmax) {
  std::vector<long> out{1};
  long prev = 0, cur = 1;
  long double y = x - std::floor(x);
  while (y > 1e-15L && out.size() < 60) {
    y = 1.0L / y;
    const long a = static_cast<long>(std::floor(y));
    y -= a;
    const long next = a * cur + prev;
    if (next > qmax) break;
    out.push_back(next);
    prev = cur;
    cur = next;
  }
  return out;
}

}  // namespace

TEST_CASE("approximation quality examples") {
  NumberField q = testing_fields::rationals();
  const ApproximationWitness w = approx_quality(q, constant_point(q, real(1.5)), alg({-3}), alg({2}));
  CHECK(w.quality.is_zero());

  NumberField k = testing_fields::sqrt2();
  const PointKS x = field_point(k, alg({0, 1}));
  const ApproximationWitness hit = approx_quality(k, x, alg({0, -1}), alg({1, 0}));
  CHECK(hit.sup_error.contains_zero());
  CHECK(hit.quality.contains_zero());

  const ApproximationWitness half = approx_quality(k, constant_point(k, real(0.5)), alg({0, 0}), alg({1, 0}));
  CHECK(half.quality.contains(0.5));
  CHECK(half.sup_denominator.contains(1.0));

  CHECK_THROWS_AS(approx_quality(k, x, alg({1, 0}), alg({0, 0})), std::invalid_argument);
}

TEST_CASE("complex places enter the quality unsquared") {
  NumberField k = testing_fields::gaussian();
  // x = 0, p = 0, q = 1 + i: quality = 0 * |1 + i|; x = 1/2 gives |1+i|/2 * |1+i| = 1
  const ApproximationWitness w = approx_quality(k, constant_point(k, real(0.5)), alg({0, 0}), alg({1, 1}));
  CHECK(w.sup_denominator.overlaps(sqrt(Real(2, P))));
  CHECK(w.quality.mid() == doctest::Approx(1.0));
}

TEST_CASE("golden ratio: agreement with the classical quantity") {
  NumberField q = testing_fields::rationals();
  const long double phi = (1.0L + std::sqrt(5.0L)) / 2.0L;
  const PointKS x = constant_point(q, (Real(1, P) + sqrt(Real(5, P))) / Real(2, P));
  for (long qmax : {1L, 5L, 50L, 200L, 1000L}) {
    const BadReport r = bad_constant_estimate(q, x, {static_cast<double>(qmax)});
    CHECK(r.q_range_certified);
    CHECK(std::abs(r.c_estimate.mid() - static_cast<double>(classical_min(phi, qmax))) < 1e-9);
  }
  // all denominators: q = 1, p = -2 gives 2 - phi = 0.381966...
  const BadReport all = bad_constant_estimate(q, x, {200.0});
  CHECK(all.c_estimate.mid() == doctest::Approx(2.0 - static_cast<double>(phi)).epsilon(1e-12));
  CHECK(all.best->q == alg({1}));

  // tail denominators approach 1/sqrt5, attained at convergents
  const double qmin = std::sqrt(200.0);
  const BadReport tail = bad_constant_estimate(q, x, {200.0, qmin});
  long double oracle = INFINITY;
  for (long d : convergent_denominators(phi, 200))
    if (d >= qmin) oracle = std::min(oracle, classical_min(phi, d, d));
  CHECK(std::abs(tail.c_estimate.mid() - static_cast<double>(oracle)) < 1e-9);
  CHECK(std::abs(tail.c_estimate.mid() - 1.0 / std::sqrt(5.0)) < 0.01);
}

TEST_CASE("exact hits give zero") {
  NumberField q = testing_fields::rationals();
  const BadReport third = bad_constant_estimate(q, constant_point(q, Real(Rational(1, 3), P)), {10.0});
  CHECK(third.c_estimate.contains_zero());
  CHECK(third.best->q == alg({3}));

  NumberField k = testing_fields::sqrt2();
  for (const auto& omega : {alg({0, 1}), alg({3, -2}), alg({1, 1})}) {
    const BadReport r = bad_constant_estimate(k, field_point(k, omega), {10.0});
    CHECK(r.c_estimate.contains_zero());
  }
}

TEST_CASE("property: quality vanishes exactly at p = -omega q") {
  NumberField k = testing_fields::sqrt2();
  const AlgebraicInteger omega = alg({1, -2});
  const PointKS x = field_point(k, omega);
  for (long q0 = -2; q0 <= 2; ++q0)
    for (long q1 = -2; q1 <= 2; ++q1) {
      if (!q0 && !q1) continue;
      const AlgebraicInteger qq = alg({q0, q1});
      const AlgebraicInteger exact = -k.mul(omega, qq);
      for (long p0 = -6; p0 <= 6; ++p0)
        for (long p1 = -6; p1 <= 6; ++p1) {
          const AlgebraicInteger pp = alg({p0, p1});
          const ApproximationWitness w = approx_quality(k, x, pp, qq);
          if (pp == exact)
            CHECK(w.quality.contains_zero());
          else
            CHECK(w.quality.certainly_positive());
        }
    }
}

TEST_CASE("property: estimate is nonincreasing in the q bound") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-2, 2);
  for (const NumberField& k : {testing_fields::sqrt2(), testing_fields::gaussian()}) {
    for (int trial = 0; trial < 5; ++trial) {
      PointKS x;
      for (int s = 0; s < k.place_count(); ++s)
        x.push_back(k.place(s).is_real() ? Complex(real(u(rng))) : Complex(real(u(rng)), real(u(rng))));
      double prev = INFINITY;
      for (double qb : {1.0, 3.0, 8.0, 20.0, 50.0}) {
        const double c = bad_constant_estimate(k, x, {qb}).c_estimate.mid();
        CHECK(c <= prev);
        prev = c;
      }
    }
  }
}

TEST_CASE("rounding search matches an exhaustive p box") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1, 1);
  NumberField k = testing_fields::sqrt2();
  for (int trial = 0; trial < 5; ++trial) {
    const PointKS x{Complex(real(u(rng))), Complex(real(u(rng)))};
    const BadReport fast = bad_constant_estimate(k, x, {12.0});
    BadOptions slow{12.0};
    slow.exhaustive_p = true;
    slow.p_box = 4;
    const BadReport full = bad_constant_estimate(k, x, slow);
    CHECK(fast.c_estimate.mid() == doctest::Approx(full.c_estimate.mid()).epsilon(1e-12));
  }
}

TEST_CASE("dani_time examples") {
  NumberField k = testing_fields::sqrt2();
  CHECK(dani_time(k, real(0.01), alg({1, 1})).mid() == doctest::Approx(3.18396).epsilon(1e-5));
  CHECK(dani_time(k, Real(1, P), alg({1, 0})).contains(0.0));
  CHECK(dani_time(k, exp(Real(-2, P)), alg({1, 0})).contains(1.0));
}

TEST_CASE("dani_check on field points and zero") {
  NumberField k = testing_fields::sqrt2();
  const FlowSpec eq = FlowSpec::equal(2);
  DaniOptions opts;
  opts.t_max = 6.0;
  opts.enumeration = {EnumerationMode::box, 4};
  const BadReport field_pt = dani_check(k, field_point(k, alg({0, 1})), eq, opts);
  CHECK(*field_pt.trajectory_floor < 0.01);
  CHECK_FALSE(*field_pt.bounded_proxy);
  CHECK(field_pt.bridge_checks > 0);
  CHECK(field_pt.bridge_violations == 0);

  opts.t_max = 3.0;
  const BadReport zero = dani_check(k, constant_point(k, Real(P)), eq, opts);
  CHECK(*zero.trajectory_floor == doctest::Approx(std::exp(-6.0)).epsilon(1e-9));
  CHECK(zero.bridge_violations == 0);

  CHECK_THROWS_AS(dani_check(k, constant_point(k, Real(P)), FlowSpec::weighted({Rational(1, 2), Rational(1, 2)}), opts),
                  std::invalid_argument);
  opts.step = 0.5;
  CHECK_THROWS_AS(dani_check(k, constant_point(k, Real(P)), eq, opts), std::invalid_argument);
}

TEST_CASE("bad constant bounds the floor from below on the covered times") {
  NumberField q = testing_fields::rationals();
  const PointKS x = constant_point(q, (Real(1, P) + sqrt(Real(5, P))) / Real(2, P));
  const double qmax = 200.0;
  const double delta = bad_constant_estimate(q, x, {qmax}).c_estimate.lower();
  DaniOptions opts;
  // every vector of sup norm < sqrt(delta) at time t has |q| < sqrt(delta) e^t <= qmax
  opts.t_max = std::log(qmax / std::sqrt(delta));
  opts.enumeration = {EnumerationMode::reduced};
  const BadReport r = dani_check(q, x, FlowSpec::equal(1), opts);
  CHECK(*r.trajectory_floor >= std::sqrt(delta) - 1e-9);
  CHECK(r.bridge_violations == 0);
}

TEST_CASE("bridge holds along random trajectories") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1, 1);
  for (const NumberField& k : {testing_fields::sqrt2(), testing_fields::pure_cubic()}) {
    PointKS x;
    for (int s = 0; s < k.place_count(); ++s)
      x.push_back(k.place(s).is_real() ? Complex(real(u(rng))) : Complex(real(u(rng)), real(u(rng))));
    DaniOptions opts;
    opts.t_max = 5.0;
    opts.enumeration = {EnumerationMode::reduced};
    const BadReport r = dani_check(k, x, FlowSpec::equal(k.place_count()), opts);
    CHECK(r.bridge_checks > 0);
    CHECK(r.bridge_violations == 0);
    CHECK(*r.trajectory_floor > 0.0);
  }
}
