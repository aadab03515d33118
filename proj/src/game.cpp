#include "badk/game.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace badk {

namespace {

Real hull_of(const Rational& lo, const Rational& hi, Precision prec) {
  return Real::hull(Real(lo, prec), Real(hi, prec));
}

Complex hull_of(const Complex& a, const Complex& b) {
  return {Real::hull(a.re, b.re), Real::hull(a.im, b.im)};
}

// certified lower bound of |z| over a rectangle
double inf_abs(const Complex& z) {
  const double x = abs(z.re).lower();
  const double y = abs(z.im).lower();
  return std::nextafter(std::sqrt(x * x + y * y), 0.0) * (1.0 - 1e-15);
}

std::vector<double> roots_of(const std::vector<Rational>& c) {
  int deg = static_cast<int>(c.size()) - 1;
  while (deg >= 0 && c[deg] == 0) --deg;
  if (deg < 1) return {};
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  const double lead = c[deg].get_d();
  for (int i = 0; i < deg; ++i) companion(0, i) = -c[deg - 1 - i].get_d() / lead;
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  std::vector<double> out;
  for (int i = 0; i < deg; ++i) {
    const std::complex<double> z = solver.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-7 * (1.0 + std::abs(z))) out.push_back(z.real());
  }
  std::sort(out.begin(), out.end());
  std::vector<double> unique;
  for (double r : out)
    if (unique.empty() || r - unique.back() > 1e-6) unique.push_back(r);
  return unique;
}

double eval_double(const std::vector<Rational>& c, double x) {
  double acc = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * x + it->get_d();
  return acc;
}

ShortVectorRecord record_of(const ModuleVector& v, const Real& h) {
  return {v.a.coeffs(), v.b.coeffs(), h.mid()};
}

bool legal_b(const Interval& a, const Interval& b, const Rational& alpha) {
  return b.radius == alpha * a.radius && a.contains(b);
}

bool legal_a(const Interval& b, const Interval& a, const Rational& beta) {
  return a.radius == beta * b.radius && b.contains(a);
}

std::vector<int> consulted_places(const GameSetup& setup) {
  if (setup.spec.is_equal_weight()) return setup.curve.active();
  return {setup.spec.fastest_place()};
}

}  // namespace

Real Interval::enclosure(Precision prec) const { return hull_of(lo(), hi(), prec); }

void GameParams::validate() const {
  if (!(alpha > 0 && alpha < Rational(1, 2))) throw std::invalid_argument("alpha must lie in (0, 1/2)");
  if (!(beta > 0 && beta < 1)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(rho > 0)) throw std::invalid_argument("rho must be positive");
  if (rounds < 1) throw std::invalid_argument("rounds must be positive");
  if (max_votes < 0) throw std::invalid_argument("max_votes must be nonnegative");
  if (preprocess_limit < 0) throw std::invalid_argument("preprocess_limit must be nonnegative");
}

Rational GameParams::a_radius(int n) const {
  Rational r = rho;
  const Rational ab = alpha * beta;
  for (int i = 0; i < n; ++i) r *= ab;
  return r;
}

// ---------------------------------------------------------------------------

Polynomial::Polynomial(std::vector<Rational> re, std::vector<Rational> im) : re_(std::move(re)), im_(std::move(im)) {
  const std::size_t n = std::max(re_.size(), im_.size());
  re_.resize(n);
  im_.resize(n);
  while (!re_.empty() && re_.back() == 0 && im_.back() == 0) {
    re_.pop_back();
    im_.pop_back();
  }
}

int Polynomial::degree() const { return static_cast<int>(re_.size()) - 1; }

bool Polynomial::is_zero() const { return re_.empty(); }

bool Polynomial::is_real() const {
  return std::all_of(im_.begin(), im_.end(), [](const Rational& c) { return c == 0; });
}

Polynomial Polynomial::derivative() const {
  std::vector<Rational> re, im;
  for (std::size_t i = 1; i < re_.size(); ++i) {
    re.push_back(re_[i] * static_cast<long>(i));
    im.push_back(im_[i] * static_cast<long>(i));
  }
  return Polynomial(re, im);
}

Polynomial Polynomial::increment(const Rational& x0) const {
  // Taylor shift by synthetic division, then drop the constant term
  std::vector<Rational> re = re_, im = im_;
  const int n = static_cast<int>(re.size());
  for (int k = 0; k < n; ++k)
    for (int i = n - 2; i >= k; --i) {
      re[i] += x0 * re[i + 1];
      im[i] += x0 * im[i + 1];
    }
  if (n > 0) {
    re[0] = 0;
    im[0] = 0;
  }
  return Polynomial(re, im);
}

Complex Polynomial::eval(const Real& x) const {
  const Precision prec = x.prec();
  Real re(0L, prec), im(0L, prec);
  for (int i = degree(); i >= 0; --i) {
    re = re * x + Real(re_[i], prec);
    im = im * x + Real(im_[i], prec);
  }
  return {re, im};
}

Complex Polynomial::eval(const Rational& x, Precision prec) const {
  Rational re = 0, im = 0;
  for (int i = degree(); i >= 0; --i) {
    re = re * x + re_[i];
    im = im * x + im_[i];
  }
  return {Real(re, prec), Real(im, prec)};
}

std::vector<double> Polynomial::real_roots() const {
  if (is_zero()) return {};
  const bool real_part_zero = std::all_of(re_.begin(), re_.end(), [](const Rational& c) { return c == 0; });
  const auto& primary = real_part_zero ? im_ : re_;
  const auto& other = real_part_zero ? re_ : im_;
  double scale = 1.0;
  for (const Rational& c : other) scale += std::abs(c.get_d());
  std::vector<double> out;
  for (double r : roots_of(primary))
    if (std::abs(eval_double(other, r)) <= 1e-8 * scale * (1.0 + std::pow(std::abs(r), degree()))) out.push_back(r);
  return out;
}

std::string Polynomial::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (int i = degree(); i >= 0; --i) {
    if (re_[i] == 0 && im_[i] == 0) continue;
    if (!first) os << " + ";
    first = false;
    if (im_[i] == 0)
      os << re_[i].get_str();
    else
      os << "(" << re_[i].get_str() << (im_[i] < 0 ? "-" : "+") << Rational(abs(im_[i])).get_str() << "i)";
    if (i >= 1) os << "*x";
    if (i >= 2) os << "^" << i;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

Curve::Curve(std::vector<Polynomial> components, std::optional<std::vector<int>> active)
    : components_(std::move(components)) {
  for (const Polynomial& p : components_) derivatives_.push_back(p.derivative());
  if (active) {
    active_ = *active;
    std::sort(active_.begin(), active_.end());
    active_.erase(std::unique(active_.begin(), active_.end()), active_.end());
    for (int s : active_)
      if (s < 0 || s >= place_count()) throw std::invalid_argument("active place index out of range");
  } else {
    for (int s = 0; s < place_count(); ++s)
      if (components_[s].degree() >= 1) active_.push_back(s);
  }
  for (int s = 0; s < place_count(); ++s) critical_.push_back(derivatives_[s].real_roots());
}

Curve Curve::linear(const std::vector<Rational>& slopes) {
  std::vector<Polynomial> comps;
  for (const Rational& a : slopes) comps.emplace_back(std::vector<Rational>{0, a});
  return Curve(comps);
}

bool Curve::is_active(int s) const { return std::binary_search(active_.begin(), active_.end(), s); }

bool Curve::is_linear() const {
  return std::all_of(components_.begin(), components_.end(), [](const Polynomial& p) { return p.degree() <= 1; });
}

PointKS Curve::eval(const Real& x) const {
  PointKS out;
  for (const Polynomial& p : components_) out.push_back(p.eval(x));
  return out;
}

PointKS Curve::eval(const Rational& x, Precision prec) const {
  PointKS out;
  for (const Polynomial& p : components_) out.push_back(p.eval(x, prec));
  return out;
}

Complex Curve::derivative_range(int s, const Rational& lo, const Rational& hi, Precision prec, int pieces) const {
  if (pieces < 1) throw std::invalid_argument("need at least one piece");
  const Rational step = (hi - lo) / pieces;
  std::optional<Complex> out;
  for (int i = 0; i < pieces; ++i) {
    const Rational a = lo + step * i;
    const Rational b = i + 1 == pieces ? hi : Rational(a + step);
    const Complex v = derivatives_[s].eval(hull_of(a, b, prec));
    out = out ? hull_of(*out, v) : v;
  }
  return *out;
}

bool Curve::satisfies_dimension_condition(const NumberField& field) const {
  if (place_count() != field.place_count()) return false;
  int weight = 0;
  for (int s : active_) weight += field.place(s).exponent();
  return weight > field.degree() / 2;
}

// ---------------------------------------------------------------------------

GameSetup::GameSetup(NumberField f, Curve c, FlowSpec s, GameParams p)
    : field(std::move(f)), curve(std::move(c)), spec(std::move(s)), params(std::move(p)),
      base(GroupElement::identity(field)) {
  params.validate();
  if (curve.place_count() != field.place_count()) throw std::invalid_argument("curve arity does not match the places");
  if (spec.place_count() != field.place_count()) throw std::invalid_argument("flow arity does not match the places");
  for (int s2 = 0; s2 < field.place_count(); ++s2)
    if (field.place(s2).is_real() && !curve.component(s2).is_real())
      throw std::invalid_argument("a real place needs a real curve component");
}

GroupElement GameSetup::module_at(const Rational& x, const Real& t) const {
  return base * unipotent(curve.eval(x, field.precision())) * flow_element(spec, t);
}

int GameSetup::max_votes() const { return params.max_votes > 0 ? params.max_votes : 2 * field.place_count(); }

Real schedule_time(const GameParams& params, int n, const FlowSpec& spec, Precision prec) {
  if (n < 0) throw std::invalid_argument("round index must be nonnegative");
  const Real r(Rational(spec.max_weight() * 2), prec);
  return -log(Real(params.a_radius(n), prec)) / r;
}

Real expanding_ratio(const PlaceVector& v, const Complex& coefficient) {
  const Real norm = place_norm(v);
  if (!norm.certainly_positive()) throw PrecisionError("expanding ratio of a vanishing place vector");
  return abs(coefficient * v.first + v.second) / norm;
}

Real expanding_ratio(const PlaceVector& v, const Complex& slope, const Real& u) {
  return expanding_ratio(v, slope * Complex(u));
}

const char* to_string(Side side) {
  switch (side) {
    case Side::left: return "L";
    case Side::right: return "R";
    case Side::center: return "center";
  }
  return "?";
}

const char* to_string(Vote vote) {
  switch (vote) {
    case Vote::left: return "L";
    case Vote::right: return "R";
    case Vote::abstain: return "abstain";
  }
  return "?";
}

Vote place_vote(const PlaceVector& v, const Complex& slope) {
  if (v.first.contains_zero()) return Vote::abstain;
  if (v.second.re.is_zero() && v.second.im.is_zero()) return Vote::right;
  const Complex w = v.second / (slope * v.first);
  // an enclosure straddling 0 means both sides lose at most the rounding
  return w.re.certainly_negative() ? Vote::left : Vote::right;
}

SideChoice choose_side(const NumberField& field, const ModuleVector& v, const std::vector<int>& places,
                       const std::vector<Complex>& slopes) {
  SideChoice out;
  int right = 0, left = 0;
  for (int p : places) {
    const Vote vote = place_vote(v.embedded[p], slopes[p]);
    out.votes[p] = vote;
    if (vote == Vote::right) right += field.place(p).exponent();
    if (vote == Vote::left) left += field.place(p).exponent();
  }
  if (right + left == 0) return out;
  out.side = right >= left ? Side::right : Side::left;
  const Vote winner = out.side == Side::right ? Vote::right : Vote::left;
  for (const auto& [p, vote] : out.votes)
    if (vote == winner) out.served.push_back(p);
  return out;
}

Interval b_interval(const Interval& a, const Rational& alpha, Side side) {
  const Rational radius = alpha * a.radius;
  const Rational shift = (1 - alpha) * a.radius;
  switch (side) {
    case Side::right: return {a.center + shift, radius};
    case Side::left: return {a.center - shift, radius};
    case Side::center: break;
  }
  return {a.center, radius};
}

// ---------------------------------------------------------------------------

namespace {

class Heedless : public PlayerB {
 public:
  std::string name() const override { return "heedless"; }
  Interval move(const GameSetup& setup, int, const Interval& a, RoundRecord& record) override {
    record.phase = "idle";
    return b_interval(a, setup.params.alpha, Side::center);
  }
};

class ShieldingStrategy : public PlayerB {
 public:
  std::string name() const override { return "shielding"; }

  void reset(const GameSetup& setup) override {
    const int places = setup.field.place_count();
    prep_done_ = false;
    prep_failed_ = false;
    prep_rounds_ = 0;
    bounds_.clear();
    slopes_.assign(places, Complex(setup.field.precision()));
    theory_.assign(places, std::nullopt);
    tracked_.reset();
    pending_.clear();
    votes_cast_ = 0;
    episodes_ = 0;
    overruns_ = 0;
    if (setup.curve.is_linear()) {
      const Precision prec = setup.field.precision();
      for (int s = 0; s < places; ++s) {
        const Polynomial& p = setup.curve.component(s);
        const Rational re = p.degree() >= 1 ? p.re()[1] : Rational(0);
        const Rational im = p.degree() >= 1 ? p.im()[1] : Rational(0);
        slopes_[s] = Complex(Real(re, prec), Real(im, prec));
        const double m = inf_abs(slopes_[s]);
        bounds_[s] = {m, abs(slopes_[s]).upper()};
        theory_[s] = std::min(1.0, m * (1.0 - 2.0 * setup.params.alpha.get_d()));
      }
      prep_done_ = true;
    }
  }

  Interval move(const GameSetup& setup, int n, const Interval& a, RoundRecord& record) override {
    const Rational& alpha = setup.params.alpha;
    if (!prep_done_ && !preprocess(setup, a, record)) return b_interval(a, alpha, record.side);
    if (prep_failed_) {
      record.phase = "idle";
      return b_interval(a, alpha, Side::center);
    }
    record.phase = "idle";

    const Precision prec = setup.field.precision();
    const GroupElement g = setup.module_at(a.center, schedule_time(setup.params, n, setup.spec, prec));
    std::vector<ModuleVector> shorts;
    std::vector<Real> heights;
    for (const ShortVectorRecord& r : record.short_vectors) {
      shorts.push_back(make_module_vector(setup.field, AlgebraicInteger(r.a), AlgebraicInteger(r.b), g));
      heights.push_back(height(setup.field, shorts.back()));
    }

    std::optional<ModuleVector> current;
    if (tracked_) {
      current = make_module_vector(setup.field, tracked_->first, tracked_->second, g);
      const Real h = height(setup.field, *current);
      for (std::size_t i = 0; i < shorts.size(); ++i)
        if (!kspan_equal(setup.field, shorts[i], *current) && heights[i].upper() < 0.5 * h.lower()) {
          record.notes.push_back("restart on a K-independent vector of less than half the height");
          start_episode(setup, shorts[i]);
          current = shorts[i];
          break;
        }
    } else if (!shorts.empty()) {
      start_episode(setup, shorts.front());
      current = shorts.front();
    }
    if (!current) return b_interval(a, alpha, Side::center);

    record.phase = "tracking";
    record.tracked = record_of(*current, height(setup.field, *current));
    for (const ModuleVector& w : shorts)
      if (!kspan_equal(setup.field, w, *current)) ++record.independent_short;

    const SideChoice choice = choose_side(setup.field, *current, pending_, slopes_);
    record.votes = choice.votes;
    record.side = choice.side;
    const Interval b = b_interval(a, alpha, choice.side);
    for (int p : choice.served) {
      const double floor = ratio_floor(setup, current->embedded[p], p, a, b);
      record.ratio_floors[p] = floor;
      if (theory_[p]) {
        record.theory_floors[p] = *theory_[p];
        if (floor < *theory_[p] - 1e-12) record.guarantee_ok = false;
      }
    }
    std::erase_if(pending_, [&](int p) { return choice.votes.at(p) != Vote::left && choice.votes.at(p) != Vote::right; });
    std::erase_if(pending_, [&](int p) {
      return std::find(choice.served.begin(), choice.served.end(), p) != choice.served.end();
    });
    ++votes_cast_;
    if (pending_.empty()) {
      record.episode_complete = true;
      tracked_.reset();
    } else if (votes_cast_ >= setup.max_votes()) {
      record.notes.push_back("voting repetitions exceeded the configured bound");
      ++overruns_;
      tracked_.reset();
    }
    return b;
  }

  void finish(Transcript& t) const override {
    t.episodes = episodes_;
    t.preprocessing_rounds = prep_rounds_;
    t.preprocessing_failed = prep_failed_;
    t.vote_overruns = overruns_;
    t.derivative_bounds = bounds_;
  }

 private:
  void start_episode(const GameSetup& setup, const ModuleVector& v) {
    tracked_ = std::make_pair(v.a, v.b);
    pending_ = consulted_places(setup);
    votes_cast_ = 0;
    ++episodes_;
  }

  // returns true once the curve's derivative is bounded away from 0 on A
  bool preprocess(const GameSetup& setup, const Interval& a, RoundRecord& record) {
    const Precision prec = setup.field.precision();
    std::map<int, Complex> ranges;
    bool clear = true;
    for (int s : setup.curve.active()) {
      ranges.emplace(s, setup.curve.derivative_range(s, a.lo(), a.hi(), prec));
      if (ranges.at(s).contains_zero()) clear = false;
    }
    if (clear) {
      for (const auto& [s, range] : ranges) {
        const double m = inf_abs(range);
        bounds_[s] = {m, abs(range).upper()};
        slopes_[s] = Complex(range.re.center(), range.im.center());
        if (setup.curve.component(s).is_real())
          theory_[s] = std::min(1.0, m * (1.0 - 2.0 * setup.params.alpha.get_d()));
      }
      prep_done_ = true;
      return true;
    }
    record.phase = "preprocessing";
    if (prep_rounds_ >= setup.params.preprocess_limit) {
      record.notes.push_back("critical points not separated within the preprocessing limit");
      prep_failed_ = true;
      prep_done_ = true;
      record.side = Side::center;
      return false;
    }
    ++prep_rounds_;
    double best = -1.0;
    for (Side side : {Side::center, Side::right, Side::left}) {
      const Interval b = b_interval(a, setup.params.alpha, side);
      const double lo = b.lo().get_d(), hi = b.hi().get_d();
      double score = std::numeric_limits<double>::infinity();
      for (int s : setup.curve.active())
        for (double c : setup.curve.critical_points(s)) score = std::min(score, std::max({lo - c, c - hi, 0.0}));
      if (score > best) {
        best = score;
        record.side = side;
      }
    }
    return false;
  }

  // certified inf over x_{n+1} in B of |e^{2t} Delta v_1 + v_2| / ||v||
  double ratio_floor(const GameSetup& setup, const PlaceVector& v, int place, const Interval& a, const Interval& b) {
    const Precision prec = setup.field.precision();
    const Polynomial delta = setup.curve.component(place).increment(a.center);
    const Real inv(Rational(1 / a.radius), prec);
    const Rational lo = b.lo() - a.center, hi = b.hi() - a.center;
    constexpr int pieces = 16;
    const Rational step = (hi - lo) / pieces;
    double out = std::numeric_limits<double>::infinity();
    for (int i = 0; i < pieces; ++i) {
      const Rational x0 = lo + step * i;
      const Complex c = delta.eval(hull_of(x0, Rational(x0 + step), prec));
      out = std::min(out, expanding_ratio(v, {c.re * inv, c.im * inv}).lower());
    }
    return out;
  }

  bool prep_done_ = false;
  bool prep_failed_ = false;
  int prep_rounds_ = 0;
  std::map<int, std::pair<double, double>> bounds_;
  std::vector<Complex> slopes_;
  std::vector<std::optional<double>> theory_;
  std::optional<std::pair<AlgebraicInteger, AlgebraicInteger>> tracked_;
  std::vector<int> pending_;
  int votes_cast_ = 0;
  int episodes_ = 0;
  int overruns_ = 0;
};

class RandomAdversary : public PlayerA {
 public:
  explicit RandomAdversary(std::uint64_t seed) : seed_(seed), rng_(seed) {}
  std::string name() const override { return "random(" + std::to_string(seed_) + ")"; }
  void reset(const GameSetup&) override { rng_.seed(seed_); }
  Interval move(const GameSetup& setup, int, const Interval& b) override {
    // dyadic u in [-1, 1) keeps every interval exactly rational
    const long k = static_cast<long>(rng_() >> 43) - (1L << 20);
    const Rational u(k, 1L << 20);
    return {b.center + u * (1 - setup.params.beta) * b.radius, setup.params.beta * b.radius};
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 rng_;
};

class CenterHugging : public PlayerA {
 public:
  std::string name() const override { return "center-hugging"; }
  Interval move(const GameSetup& setup, int, const Interval& b) override {
    return {b.center, setup.params.beta * b.radius};
  }
};

class Seeker : public PlayerA {
 public:
  std::string name() const override { return "short-vector-seeker"; }
  void reset(const GameSetup&) override { warm_.reset(); }
  Interval move(const GameSetup& setup, int n, const Interval& b) override {
    const Precision prec = setup.field.precision();
    const Real t = schedule_time(setup.params, n, setup.spec, prec);
    const Rational slack = (1 - setup.params.beta) * b.radius;
    std::optional<Interval> best;
    double best_height = std::numeric_limits<double>::infinity();
    std::optional<IntegralBasis> best_basis;
    for (const Rational& u : {Rational(-1), Rational(-1, 2), Rational(0), Rational(1, 2), Rational(1)}) {
      const Interval cand{b.center + u * slack, setup.params.beta * b.radius};
      EnumerationOptions opts = setup.enumeration;
      if (warm_) opts.warm_start = &*warm_;
      const Systole s = systole(setup.field, setup.module_at(cand.center, t), opts);
      if (s.height.mid() < best_height) {
        best_height = s.height.mid();
        best = cand;
        best_basis = s.basis;
      }
    }
    warm_ = best_basis;
    return *best;
  }

 private:
  std::optional<IntegralBasis> warm_;
};

}  // namespace

std::unique_ptr<PlayerA> random_adversary(std::uint64_t seed) { return std::make_unique<RandomAdversary>(seed); }
std::unique_ptr<PlayerA> center_hugging() { return std::make_unique<CenterHugging>(); }
std::unique_ptr<PlayerA> short_vector_seeker() { return std::make_unique<Seeker>(); }

std::unique_ptr<PlayerA> make_adversary(const std::string& name, std::uint64_t seed) {
  if (name == "random") return random_adversary(seed);
  if (name == "center-hugging" || name == "center_hugging") return center_hugging();
  if (name == "seeker" || name == "short-vector-seeker" || name == "short_vector_seeker")
    return short_vector_seeker();
  throw std::invalid_argument("unknown adversary: " + name);
}

std::unique_ptr<PlayerB> shielding_strategy() { return std::make_unique<ShieldingStrategy>(); }
std::unique_ptr<PlayerB> heedless_strategy() { return std::make_unique<Heedless>(); }

std::unique_ptr<PlayerB> make_strategy(const std::string& name) {
  if (name == "shielding") return shielding_strategy();
  if (name == "heedless") return heedless_strategy();
  throw std::invalid_argument("unknown strategy: " + name);
}

Transcript play_game(const GameSetup& setup, PlayerA& a, PlayerB& b) {
  const GameParams& params = setup.params;
  const Precision prec = setup.field.precision();
  a.reset(setup);
  b.reset(setup);

  Transcript out;
  out.params = params;
  out.player_a = a.name();
  out.player_b = b.name();
  out.systole_floor = std::numeric_limits<double>::infinity();

  Interval current{params.x0, params.rho};
  std::optional<IntegralBasis> warm;
  for (int n = 0; n < params.rounds; ++n) {
    RoundRecord rec;
    rec.n = n;
    rec.a = current;
    const Real t = schedule_time(params, n, setup.spec, prec);
    rec.t_n = t.mid();

    const GroupElement g = setup.module_at(current.center, t);
    EnumerationOptions opts = setup.enumeration;
    if (warm) opts.warm_start = &*warm;
    const Systole s = systole(setup.field, g, opts);
    warm = s.basis;
    opts.warm_start = warm ? &*warm : nullptr;
    rec.systole = s.height.lower();
    out.systole_floor = std::min(out.systole_floor, rec.systole);
    const double bound = std::min(1.0, short_list_bound(setup.field, s.height.upper()));
    for (const ShortVector& v : shortest_vectors(setup.field, g, bound, opts).vectors)
      rec.short_vectors.push_back(record_of(v.vector, v.height));

    rec.b = b.move(setup, n, current, rec);
    const bool b_ok = legal_b(current, rec.b, params.alpha);
    out.rounds.push_back(rec);
    if (!b_ok) {
      out.forfeit = true;
      out.forfeit_reason = "player B made an illegal move in round " + std::to_string(n);
      break;
    }
    if (n + 1 == params.rounds) break;
    const Interval next = a.move(setup, n + 1, rec.b);
    if (!legal_a(rec.b, next, params.beta)) {
      out.forfeit = true;
      out.forfeit_reason = "player A made an illegal move in round " + std::to_string(n + 1);
      break;
    }
    current = next;
  }
  out.x_inf = out.rounds.back().b;
  b.finish(out);
  return out;
}

std::vector<std::string> legality_violations(const Transcript& transcript) {
  std::vector<std::string> out;
  const GameParams& p = transcript.params;
  const auto& rounds = transcript.rounds;
  for (std::size_t i = 0; i < rounds.size(); ++i) {
    const RoundRecord& r = rounds[i];
    const std::string tag = "round " + std::to_string(r.n) + ": ";
    if (r.n != static_cast<int>(i)) out.push_back(tag + "round index out of sequence");
    if (r.a.radius != p.a_radius(r.n)) out.push_back(tag + "A radius differs from rho (alpha beta)^n");
    if (r.b.radius != p.alpha * r.a.radius) out.push_back(tag + "B radius differs from alpha * radius(A)");
    if (!r.a.contains(r.b)) out.push_back(tag + "B is not inside A");
    if (i + 1 < rounds.size()) {
      const Interval& next = rounds[i + 1].a;
      if (next.radius != p.beta * r.b.radius) out.push_back(tag + "next A radius differs from beta * radius(B)");
      if (!r.b.contains(next)) out.push_back(tag + "next A is not inside B");
    }
  }
  if (rounds.empty()) {
    out.push_back("empty transcript");
  } else if (transcript.x_inf.center != rounds.back().b.center || transcript.x_inf.radius != rounds.back().b.radius) {
    out.push_back("x_inf differs from the last B-interval");
  }
  if (rounds.size() == 0 || (!transcript.forfeit && static_cast<int>(rounds.size()) != p.rounds))
    out.push_back("round count differs from the parameters");
  if (rounds.size() > 0 && rounds.front().a.center != p.x0) out.push_back("A_0 is not centered at x0");
  return out;
}

BadReport verify_outcome(const GameSetup& setup, const Transcript& transcript, const VerifyOptions& options) {
  const Precision prec = setup.field.precision();
  const PointKS x = setup.curve.eval(transcript.x_inf.enclosure(prec));
  // the input radius r is magnified by e^{2t}; stop before it reaches 1e-6
  const double r = transcript.x_inf.radius.get_d();
  const double t_cap = r > 0 ? 0.5 * std::log(1e-6 / r) : options.t_max;
  const double t_max = std::max(0.0, std::min(options.t_max, t_cap));

  if (setup.spec.is_equal_weight()) {
    DaniOptions dani;
    dani.t_max = t_max;
    dani.step = options.step;
    dani.floor_threshold = options.floor_threshold;
    dani.enumeration = options.enumeration;
    if (options.q_bound >= 1.0) dani.bad = BadOptions{options.q_bound};
    return dani_check(setup.field, x, setup.spec, dani);
  }

  BadReport report;
  report.x = x;
  std::vector<double> grid;
  const long steps = static_cast<long>(std::floor(t_max / options.step + 1e-9));
  for (long i = 0; i <= steps; ++i) grid.push_back(static_cast<double>(i) * options.step);
  double floor = std::numeric_limits<double>::infinity();
  for (const ProfilePoint& p : trajectory_profile(setup.field, unipotent(x), setup.spec, grid, options.enumeration))
    floor = std::min(floor, p.systole.height.lower());
  report.trajectory_floor = floor;
  report.t_max = grid.back();
  report.bounded_proxy = floor >= options.floor_threshold;
  return report;
}

CounterexampleReport counterexample_demo(const NumberField& cubic, double t_max, double x_step, double t_step,
                                         int tree_depth, const GameParams& params) {
  if (cubic.degree() != 3 || cubic.real_places() != 3) throw std::invalid_argument("needs a totally real cubic field");
  if (!(x_step > 0 && t_step > 0 && t_max >= 0)) throw std::invalid_argument("grid steps must be positive");
  if (tree_depth < 0 || tree_depth > 6) throw std::invalid_argument("tree depth must lie in [0, 6]");
  const Precision prec = cubic.precision();
  CounterexampleReport out;

  const long xs = std::lround(1.0 / x_step);
  const long ts = static_cast<long>(std::floor(t_max / t_step + 1e-9));
  const FlowSpec spec = FlowSpec::equal(3);
  std::vector<double> worst(ts + 1, 0.0);
  for (long j = 0; j <= ts; ++j) {
    const double t = static_cast<double>(j) * t_step;
    const Real tr = Real::from_double(t, prec);
    for (long i = 0; i <= xs; ++i) {
      const double x = static_cast<double>(i) / static_cast<double>(xs);
      const PointKS phi{Complex(Real(prec)), Complex(Real(prec)), Complex(Real::from_double(x, prec))};
      const ModuleVector v = make_module_vector(cubic, cubic.one(), cubic.zero(), unipotent(phi) * flow_element(spec, tr));
      const Real h = height(cubic, v);
      const double closed = std::exp(-2.0 * t) * std::max(std::exp(-t), std::exp(t) * x);
      out.rows.push_back({x, t, h.mid(), closed});
      out.max_deviation = std::max(out.max_deviation, std::abs(h.mid() - closed));
      worst[j] = std::max(worst[j], h.upper());
    }
  }
  for (long j = ts; j >= 0 && worst[j] < out.threshold; --j) out.decay_time = static_cast<double>(j) * t_step;

  const GameSetup setup(cubic, Curve({Polynomial(), Polynomial(), Polynomial({0, 1})}), spec, params);
  out.tree.resize(tree_depth + 1);
  for (int k = 0; k <= tree_depth; ++k) {
    out.tree[k].depth = k;
    out.tree[k].t = schedule_time(params, k, spec, prec).mid();
    out.tree[k].best_systole = 0.0;
  }
  out.best_path_floor = 0.0;
  std::vector<Real> times;
  for (int k = 0; k <= tree_depth; ++k) times.push_back(schedule_time(params, k, spec, prec));
  EnumerationOptions opts{EnumerationMode::reduced};
  // B branches over three moves, A answers by hugging the center
  auto walk = [&](auto&& self, const Interval& a, int k, double path_min) -> void {
    const double s = systole(cubic, setup.module_at(a.center, times[k]), opts).height.mid();
    out.tree[k].best_systole = std::max(out.tree[k].best_systole, s);
    path_min = std::min(path_min, s);
    if (k == tree_depth) {
      out.best_path_floor = std::max(out.best_path_floor, path_min);
      return;
    }
    for (Side side : {Side::left, Side::center, Side::right}) {
      const Interval b = b_interval(a, params.alpha, side);
      self(self, Interval{b.center, params.beta * b.radius}, k + 1, path_min);
    }
  };
  walk(walk, Interval{params.x0, params.rho}, 0, std::numeric_limits<double>::infinity());
  return out;
}

std::vector<SweepEntry> weight_sweep(const NumberField& field, const Curve& curve,
                                     const std::vector<std::vector<Rational>>& weights, const GameParams& params,
                                     const std::string& adversary, const VerifyOptions& verify) {
  std::vector<SweepEntry> out;
  for (const auto& w : weights) {
    SweepEntry e;
    e.weights = w;
    const FlowSpec spec = FlowSpec::weighted(w);
    const GameSetup setup(field, curve, spec, params);
    e.fastest_place = spec.fastest_place();
    for (int s = 0; s < field.place_count(); ++s)
      if (w[s] == 0 || !curve.is_active(s)) e.hypothesis_violated = true;
    auto a = make_adversary(adversary, params.seed);
    auto b = shielding_strategy();
    e.transcript = play_game(setup, *a, *b);
    e.transcript.verification = verify_outcome(setup, e.transcript, verify);
    e.violations = legality_violations(e.transcript);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace badk
