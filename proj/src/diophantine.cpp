#include "badk/diophantine.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace badk {

namespace {

std::complex<double> to_double(const Complex& z) { return {z.re.mid(), z.im.mid()}; }

Eigen::MatrixXcd vandermonde(const NumberField& field) {
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
  return w;
}

// x at every complex embedding, conjugates included, matching conjugates()
std::vector<std::complex<double>> spread(const NumberField& field, const PointKS& x) {
  std::vector<std::complex<double>> out;
  for (int s = 0; s < field.place_count(); ++s) {
    out.push_back(to_double(x[s]));
    if (!field.place(s).is_real()) out.push_back(std::conj(out.back()));
  }
  return out;
}

}  // namespace

PointKS field_point(const NumberField& field, const AlgebraicInteger& omega) { return field.tau(omega); }

PointKS constant_point(const NumberField& field, const Real& value) {
  return PointKS(field.place_count(), Complex(value));
}

ApproximationWitness approx_quality(const NumberField& field, const PointKS& x, const AlgebraicInteger& p,
                                    const AlgebraicInteger& q) {
  if (q.is_zero()) throw std::invalid_argument("approximation denominator q must be nonzero");
  if (static_cast<int>(x.size()) != field.place_count()) throw std::invalid_argument("point arity mismatch");
  std::optional<Real> err, den;
  for (int s = 0; s < field.place_count(); ++s) {
    const Complex sq = field.embed(q, s);
    const Real e = abs(field.embed(p, s) + x[s] * sq);
    const Real n = abs(sq);
    err = err ? max(*err, e) : e;
    den = den ? max(*den, n) : n;
  }
  return {p, q, *err * *den, *err, *den};
}

BadReport bad_constant_estimate(const NumberField& field, const PointKS& x, const BadOptions& options) {
  if (!(options.q_bound >= 1.0)) throw std::invalid_argument("q bound must be at least 1");
  if (static_cast<int>(x.size()) != field.place_count()) throw std::invalid_argument("point arity mismatch");
  const int d = field.degree();

  const Eigen::MatrixXcd w = vandermonde(field);
  const Eigen::MatrixXcd winv = w.inverse();
  double row_sum = 0.0;
  for (int i = 0; i < d; ++i) row_sum = std::max(row_sum, winv.row(i).cwiseAbs().sum());
  const long needed = static_cast<long>(std::ceil(row_sum * options.q_bound * (1.0 + 1e-9)));
  const long box = options.coeff_box > 0 ? options.coeff_box : needed;

  const auto xs = spread(field, x);
  std::vector<std::vector<std::complex<double>>> powers(d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) powers[j].push_back(w(j, i));

  BadReport report;
  report.x = x;
  report.q_bound = options.q_bound;
  report.q_min = options.q_min;
  report.q_range_certified = box >= needed;

  double best_quality = std::numeric_limits<double>::infinity();
  std::vector<long> best_q, best_p;

  std::vector<long> q(d, -box);
  std::vector<std::complex<double>> sq(d), target(d);
  const long reach = options.exhaustive_p ? options.p_box : 1;
  std::vector<long> p(d), base(d), off(d);
  while (true) {
    // one representative of each pair +-q: first nonzero coefficient positive
    int lead = 0;
    while (lead < d && q[lead] == 0) ++lead;
    if (lead < d && q[lead] > 0) {
      double sup_q = 0.0;
      for (int j = 0; j < d; ++j) {
        sq[j] = 0.0;
        for (int i = 0; i < d; ++i) sq[j] += static_cast<double>(q[i]) * powers[j][i];
        sup_q = std::max(sup_q, std::abs(sq[j]));
        target[j] = -xs[j] * sq[j];
      }
      if (sup_q <= options.q_bound * (1.0 + 1e-12) && sup_q >= options.q_min) {
        const Eigen::VectorXcd coords =
            winv * Eigen::Map<Eigen::VectorXcd>(target.data(), static_cast<Eigen::Index>(d));
        for (int i = 0; i < d; ++i) base[i] = std::lround(coords(i).real());
        std::fill(off.begin(), off.end(), -reach);
        while (true) {
          for (int i = 0; i < d; ++i) p[i] = base[i] + off[i];
          double err = 0.0;
          for (int j = 0; j < d; ++j) {
            std::complex<double> sp = 0.0;
            for (int i = 0; i < d; ++i) sp += static_cast<double>(p[i]) * powers[j][i];
            err = std::max(err, std::abs(sp + xs[j] * sq[j]));
          }
          const double quality = err * sup_q;
          ++report.candidates;
          if (quality < best_quality || (quality == best_quality && q < best_q)) {
            best_quality = quality;
            best_q = q;
            best_p = p;
          }
          int i = 0;
          while (i < d && ++off[i] > reach) off[i++] = -reach;
          if (i == d) break;
        }
      }
    }
    int i = 0;
    while (i < d && ++q[i] > box) q[i++] = -box;
    if (i == d) break;
  }
  if (best_q.empty()) throw std::invalid_argument("no admissible denominator q in the requested range");

  const AlgebraicInteger bq(std::vector<Integer>(best_q.begin(), best_q.end()));
  const AlgebraicInteger bp(std::vector<Integer>(best_p.begin(), best_p.end()));
  report.best = approx_quality(field, x, bp, bq);
  report.c_estimate = report.best->quality;
  return report;
}

Real dani_time(const NumberField& field, const Real& c, const AlgebraicInteger& q) {
  if (!c.certainly_positive()) throw std::invalid_argument("dani_time needs c > 0");
  if (q.is_zero()) throw std::invalid_argument("dani_time needs q != 0");
  std::optional<Real> m;
  for (int s = 0; s < field.place_count(); ++s) {
    const Real a = abs(field.embed(q, s));
    m = m ? max(*m, a) : a;
  }
  return -log(c) / Real(2, c.prec()) + log(*m);
}

BadReport dani_check(const NumberField& field, const PointKS& x, const FlowSpec& spec, const DaniOptions& options) {
  if (!spec.is_equal_weight()) throw std::invalid_argument("the Dani correspondence is checked for the equal-weight flow");
  if (!(options.step > 0.0 && options.step <= 0.25)) throw std::invalid_argument("time step must lie in (0, 0.25]");
  if (!(options.t_max >= 0.0)) throw std::invalid_argument("t_max must be nonnegative");

  BadReport report;
  if (options.bad) {
    report = bad_constant_estimate(field, x, *options.bad);
  } else {
    report.x = x;
  }

  const GroupElement base = unipotent(x);
  const long steps = static_cast<long>(std::floor(options.t_max / options.step + 1e-9));
  double floor = std::numeric_limits<double>::infinity();
  std::optional<IntegralBasis> warm;
  for (long i = 0; i <= steps; ++i) {
    const double t = static_cast<double>(i) * options.step;
    const GroupElement g = base * flow_element(spec, Real::from_double(t, field.precision()));
    EnumerationOptions opts = options.enumeration;
    if (warm) opts.warm_start = &*warm;
    const Systole s = systole(field, g, opts);
    warm = s.basis;
    floor = std::min(floor, s.height.lower());

    // a vector with q != 0 and sup norm c' at time t forces quality <= c'^2
    const double bound = short_list_bound(field, s.height.upper());
    for (const auto& v : shortest_vectors(field, g, bound, opts).vectors) {
      if (v.vector.a.is_zero()) continue;
      const ApproximationWitness wq = approx_quality(field, x, v.vector.b, v.vector.a);
      const Real norm = sup_norm(v.vector);
      ++report.bridge_checks;
      if (wq.quality.lower() > sqr(norm).upper() * (1.0 + 1e-9)) ++report.bridge_violations;
    }
  }
  report.trajectory_floor = floor;
  report.t_max = static_cast<double>(steps) * options.step;
  report.bounded_proxy = floor >= options.floor_threshold;
  return report;
}

}  // namespace badk
