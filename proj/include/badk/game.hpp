// Schmidt's (alpha, beta)-game on intervals of R for points phi(x) of a
// curve in K_S, with Player B steering short vectors of Lambda Phi(x) g_t
// into the expanding direction.
#pragma once

#include "badk/diophantine.hpp"
#include "badk/latticeflow.hpp"
#include "badk/numberfield.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace badk {

/// Closed ball B(center, radius) in R with exact rational data.
struct Interval {
  Rational center;
  Rational radius;

  Rational lo() const { return center - radius; }
  Rational hi() const { return center + radius; }
  bool contains(const Interval& inner) const { return inner.lo() >= lo() && inner.hi() <= hi(); }
  Real enclosure(Precision prec) const;
};

struct GameParams {
  Rational alpha{1, 4};
  Rational beta{1, 2};
  Rational rho{1, 2};
  int rounds = 10;
  std::uint64_t seed = 0;
  // A_0 = B(x0, rho)
  Rational x0{1, 2};
  // bound on voting repetitions per tracked vector; 0 means 2 |S|
  int max_votes = 0;
  // rounds allowed for steering away from critical points
  int preprocess_limit = 64;

  void validate() const;
  // radius rho (alpha beta)^n of A_n
  Rational a_radius(int n) const;
};

/// Polynomial in a real variable with Gaussian-rational coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> re, std::vector<Rational> im = {});

  int degree() const;
  bool is_zero() const;
  bool is_real() const;
  const std::vector<Rational>& re() const { return re_; }
  const std::vector<Rational>& im() const { return im_; }

  Polynomial derivative() const;
  // coefficients in h of p(x0 + h) - p(x0)
  Polynomial increment(const Rational& x0) const;
  Complex eval(const Real& x) const;
  Complex eval(const Rational& x, Precision prec) const;
  // common real zeros of the real and imaginary parts, approximately
  std::vector<double> real_roots() const;
  std::string to_string() const;

 private:
  std::vector<Rational> re_;
  std::vector<Rational> im_;
};

/// phi = (phi_sigma)_sigma : R -> K_S with an active set S' of places.
class Curve {
 public:
  // active places default to those with a nonconstant component
  explicit Curve(std::vector<Polynomial> components, std::optional<std::vector<int>> active = std::nullopt);
  static Curve linear(const std::vector<Rational>& slopes);

  int place_count() const { return static_cast<int>(components_.size()); }
  const Polynomial& component(int s) const { return components_[s]; }
  const Polynomial& derivative(int s) const { return derivatives_[s]; }
  const std::vector<int>& active() const { return active_; }
  bool is_active(int s) const;
  const std::vector<double>& critical_points(int s) const { return critical_[s]; }
  // every component has degree <= 1
  bool is_linear() const;

  PointKS eval(const Real& x) const;
  PointKS eval(const Rational& x, Precision prec) const;
  // certified enclosure of phi'_sigma over [lo, hi] by subdivision
  Complex derivative_range(int s, const Rational& lo, const Rational& hi, Precision prec, int pieces = 32) const;
  // #real active + 2 #complex active > floor(d / 2)
  bool satisfies_dimension_condition(const NumberField& field) const;

 private:
  std::vector<Polynomial> components_;
  std::vector<Polynomial> derivatives_;
  std::vector<int> active_;
  std::vector<std::vector<double>> critical_;
};

/// Everything both players see.
struct GameSetup {
  NumberField field;
  Curve curve;
  FlowSpec spec;
  GameParams params;
  // base point g of Lambda = tau(O_K^2) g
  GroupElement base;
  EnumerationOptions enumeration{EnumerationMode::reduced};

  GameSetup(NumberField f, Curve c, FlowSpec s, GameParams p);
  // Lambda Phi(x) g(r)_t
  GroupElement module_at(const Rational& x, const Real& t) const;
  int max_votes() const;
};

// t_n = log(1 / (rho (alpha beta)^n)) / (2 r) with r the largest flow weight
Real schedule_time(const GameParams& params, int n, const FlowSpec& spec, Precision prec = kDefaultPrecision);

// |c v_1 + v_2| / ||v|| for the offset coefficient c = slope * u (linear
// curves) or (phi(x_n + x) - phi(x_n)) / (rho (alpha beta)^n)
Real expanding_ratio(const PlaceVector& v, const Complex& coefficient);
Real expanding_ratio(const PlaceVector& v, const Complex& slope, const Real& u);

enum class Side { left, right, center };
enum class Vote { left, right, abstain };

const char* to_string(Side side);
const char* to_string(Vote vote);

// right iff Re(v_2 / (slope v_1)) >= 0; abstains when v_1 may vanish
Vote place_vote(const PlaceVector& v, const Complex& slope);

struct SideChoice {
  Side side = Side::center;
  std::map<int, Vote> votes;
  // places whose vote agreed with the chosen side
  std::vector<int> served;
};

// weighted majority (e_sigma) over the given places, ties to the right
SideChoice choose_side(const NumberField& field, const ModuleVector& v, const std::vector<int>& places,
                       const std::vector<Complex>& slopes);

// B-interval of radius alpha r inside A = B(c, r) on the given side
Interval b_interval(const Interval& a, const Rational& alpha, Side side);

struct ShortVectorRecord {
  std::vector<Integer> a;
  std::vector<Integer> b;
  double height = 0.0;
};

struct RoundRecord {
  int n = 0;
  Interval a;
  Interval b;
  double t_n = 0.0;
  std::string phase;  // preprocessing, tracking, idle
  std::vector<ShortVectorRecord> short_vectors;
  std::optional<ShortVectorRecord> tracked;
  std::map<int, Vote> votes;
  Side side = Side::center;
  // certified lower bound of the expanding ratio over B at each served place
  std::map<int, double> ratio_floors;
  // min(1, inf |phi'| (1 - 2 alpha)) at the served places
  std::map<int, double> theory_floors;
  bool guarantee_ok = true;
  // every consulted place of the tracked vector has been served
  bool episode_complete = false;
  // short vectors that are K-independent of the tracked one
  int independent_short = 0;
  // systole of Lambda Phi(x_n) g_{t_n}
  double systole = 0.0;
  std::vector<std::string> notes;
};

struct Transcript {
  GameParams params;
  std::string player_a;
  std::string player_b;
  std::vector<RoundRecord> rounds;
  Interval x_inf;
  double systole_floor = 0.0;
  int episodes = 0;
  int preprocessing_rounds = 0;
  bool preprocessing_failed = false;
  int vote_overruns = 0;
  std::map<int, std::pair<double, double>> derivative_bounds;  // m_sigma, M_sigma
  bool forfeit = false;
  std::string forfeit_reason;
  std::optional<BadReport> verification;
};

class PlayerA {
 public:
  virtual ~PlayerA() = default;
  virtual std::string name() const = 0;
  virtual void reset(const GameSetup&) {}
  // A_{n} inside the previous B-interval, radius beta * radius(B)
  virtual Interval move(const GameSetup& setup, int n, const Interval& b) = 0;
};

class PlayerB {
 public:
  virtual ~PlayerB() = default;
  virtual std::string name() const = 0;
  virtual void reset(const GameSetup&) {}
  virtual Interval move(const GameSetup& setup, int n, const Interval& a, RoundRecord& record) = 0;
  virtual void finish(Transcript&) const {}
};

std::unique_ptr<PlayerA> random_adversary(std::uint64_t seed);
std::unique_ptr<PlayerA> center_hugging();
// picks, among offsets {-1, -1/2, 0, 1/2, 1} of the admissible range, the
// center minimizing the systole at the next round's time
std::unique_ptr<PlayerA> short_vector_seeker();
std::unique_ptr<PlayerA> make_adversary(const std::string& name, std::uint64_t seed);

std::unique_ptr<PlayerB> shielding_strategy();
std::unique_ptr<PlayerB> heedless_strategy();
std::unique_ptr<PlayerB> make_strategy(const std::string& name);

Transcript play_game(const GameSetup& setup, PlayerA& a, PlayerB& b);

// radius and nesting laws of every round
std::vector<std::string> legality_violations(const Transcript& transcript);

struct VerifyOptions {
  double q_bound = 50.0;
  double t_max = 8.0;
  double step = 0.25;
  double floor_threshold = 1e-3;
  EnumerationOptions enumeration{EnumerationMode::reduced};
};

// Dani check (equal weights) or weighted trajectory floor at phi(x_inf),
// with x_inf the final B-interval as an enclosure.
BadReport verify_outcome(const GameSetup& setup, const Transcript& transcript, const VerifyOptions& options);

struct DecayRow {
  double x = 0.0;
  double t = 0.0;
  double height = 0.0;       // certified midpoint of H(tau(1,0) Phi(x) g_t)
  double closed_form = 0.0;  // e^{-2t} max(e^{-t}, e^t |x|)
};

struct TreeLevel {
  int depth = 0;
  double t = 0.0;
  // max over B's move sequences of the systole at t_depth
  double best_systole = 0.0;
};

struct CounterexampleReport {
  std::vector<DecayRow> rows;
  double max_deviation = 0.0;
  // smallest grid time after which H < threshold at every grid x
  std::optional<double> decay_time;
  double threshold = 1e-3;
  std::vector<TreeLevel> tree;
  // max over B paths of the minimum systole along the path
  double best_path_floor = 0.0;
};

// Totally real cubic with phi = (0, 0, x): the vector tau(1, 0) decays for
// every x, whatever Player B does.
CounterexampleReport counterexample_demo(const NumberField& cubic, double t_max, double x_step, double t_step,
                                         int tree_depth, const GameParams& params);

struct SweepEntry {
  std::vector<Rational> weights;
  Transcript transcript;
  std::vector<std::string> violations;
  int fastest_place = 0;
  // a zero weight or an inactive place: the weighted guarantee does not apply
  bool hypothesis_violated = false;
};

std::vector<SweepEntry> weight_sweep(const NumberField& field, const Curve& curve,
                                     const std::vector<std::vector<Rational>>& weights, const GameParams& params,
                                     const std::string& adversary, const VerifyOptions& verify);

}  // namespace badk
