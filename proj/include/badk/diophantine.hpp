// Approximation quality of points of K_S by quotients of integers of K,
// bad-constant estimates and the Dani correspondence with the flow.
#pragma once

#include "badk/latticeflow.hpp"
#include "badk/numberfield.hpp"

#include <optional>
#include <vector>

namespace badk {

/// q != 0 and p in O_K with quality = max|sigma(p) + x^sigma sigma(q)| * max|sigma(q)|.
/// Complex places enter with the plain absolute value, not its square.
struct ApproximationWitness {
  AlgebraicInteger p;
  AlgebraicInteger q;
  Real quality;
  Real sup_error;
  Real sup_denominator;
};

ApproximationWitness approx_quality(const NumberField& field, const PointKS& x, const AlgebraicInteger& p,
                                    const AlgebraicInteger& q);

struct BadOptions {
  // denominators with q_min <= max|sigma(q)| <= q_bound
  double q_bound = 100.0;
  double q_min = 0.0;
  // power-basis box for q; 0 sizes it from the inverse Vandermonde matrix
  long coeff_box = 0;
  // validation mode: also scan every p in a box around the rounded candidate
  bool exhaustive_p = false;
  long p_box = 3;
};

struct BadReport {
  PointKS x;
  double q_bound = 0.0;
  double q_min = 0.0;
  std::optional<ApproximationWitness> best;
  Real c_estimate;
  // the q box covers every q with max|sigma(q)| <= q_bound
  bool q_range_certified = false;
  long candidates = 0;

  // filled by dani_check
  std::optional<double> trajectory_floor;
  std::optional<double> t_max;
  std::optional<bool> bounded_proxy;
  long bridge_checks = 0;
  long bridge_violations = 0;
};

BadReport bad_constant_estimate(const NumberField& field, const PointKS& x, const BadOptions& options);

// t = -log(c) / 2 + log max_sigma |sigma(q)|
Real dani_time(const NumberField& field, const Real& c, const AlgebraicInteger& q);

struct DaniOptions {
  double t_max = 8.0;
  double step = 0.25;
  double floor_threshold = 1e-3;
  EnumerationOptions enumeration;
  // optional bad-constant search folded into the same report
  std::optional<BadOptions> bad;
};

// Systole floor of Lambda Phi(x) g_t over t in [0, t_max] plus the
// quality-versus-norm cross-check on every enumerated short vector.
BadReport dani_check(const NumberField& field, const PointKS& x, const FlowSpec& spec, const DaniOptions& options);

// x^sigma for a field element x = omega
PointKS field_point(const NumberField& field, const AlgebraicInteger& omega);
// the same real value at every place
PointKS constant_point(const NumberField& field, const Real& value);

}  // namespace badk
