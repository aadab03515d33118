#include "badk/io.hpp"

#include <cctype>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace badk::io {

namespace {

Rational parse_decimal(const std::string& text) {
  std::size_t i = 0;
  bool negative = false;
  if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
  std::string digits;
  long exponent = 0;
  bool any = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i, any = true) digits += text[i];
  if (i < text.size() && text[i] == '.') {
    for (++i; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i, any = true) {
      digits += text[i];
      --exponent;
    }
  }
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    std::size_t used = 0;
    exponent += std::stol(text.substr(i + 1), &used);
    i += 1 + used;
  }
  if (!any || i != text.size()) throw std::invalid_argument("not a rational number: " + text);
  Rational out(Integer(digits.empty() ? "0" : digits, 10));
  Integer ten_pow;
  mpz_ui_pow_ui(ten_pow.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
  if (exponent >= 0)
    out *= ten_pow;
  else
    out /= ten_pow;
  return negative ? Rational(-out) : out;
}

std::string g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json optional_json(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

Rational parse_rational(const json& j) {
  if (j.is_number_integer()) return Rational(static_cast<long>(j.get<std::int64_t>()));
  if (j.is_number_float()) {
    Rational q;
    q = j.get<double>();
    return q;
  }
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.find('/') != std::string::npos) {
      Rational q;
      if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw std::invalid_argument("not a rational number: " + s);
      q.canonicalize();
      return q;
    }
    return parse_decimal(s);
  }
  throw std::invalid_argument("expected a rational number, got " + j.dump());
}

Real parse_real(const json& j, Precision prec) {
  if (j.is_number_integer()) return Real(static_cast<long>(j.get<std::int64_t>()), prec);
  if (j.is_number_float()) return Real::from_double(j.get<double>(), prec);
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s.find('/') != std::string::npos) return Real(parse_rational(j), prec);
    return Real::from_string(s, prec);
  }
  throw std::invalid_argument("expected a real number, got " + j.dump());
}

json to_json(const Real& x) { return {{"value", x.mid()}, {"radius", x.rad()}}; }

json to_json(const Complex& z) { return {{"re", to_json(z.re)}, {"im", to_json(z.im)}}; }

json to_json(const Rational& q) { return q.get_str(); }

json to_json(const Integer& n) {
  if (n.fits_slong_p()) return n.get_si();
  return n.get_str();
}

json to_json(const AlgebraicInteger& a) {
  json out = json::array();
  for (const Integer& c : a.coeffs()) out.push_back(to_json(c));
  return out;
}

json to_json(const Interval& i) { return json::array({i.center.get_d(), i.radius.get_d()}); }

json to_json(const GameParams& p) {
  return {{"alpha", to_json(p.alpha)}, {"beta", to_json(p.beta)},       {"rho", to_json(p.rho)},
          {"rounds", p.rounds},        {"seed", p.seed},                {"x0", to_json(p.x0)},
          {"max_votes", p.max_votes},  {"preprocess_limit", p.preprocess_limit}};
}

json to_json(const ApproximationWitness& w) {
  return {{"p", to_json(w.p)},
          {"q", to_json(w.q)},
          {"quality", to_json(w.quality)},
          {"sup_error", to_json(w.sup_error)},
          {"sup_denominator", to_json(w.sup_denominator)}};
}

json to_json(const BadReport& r) {
  json x = json::array();
  for (const Complex& z : r.x) x.push_back(to_json(z));
  json out = {{"x", x},
              {"q_bound", r.q_bound},
              {"q_min", r.q_min},
              {"q_range_certified", r.q_range_certified},
              {"candidates", r.candidates},
              {"trajectory_floor", optional_json(r.trajectory_floor)},
              {"t_max", optional_json(r.t_max)},
              {"bounded_proxy", r.bounded_proxy ? json(*r.bounded_proxy) : json(nullptr)},
              {"bridge_checks", r.bridge_checks},
              {"bridge_violations", r.bridge_violations}};
  if (r.best) {
    out["best"] = to_json(*r.best);
    out["c_estimate"] = to_json(r.c_estimate);
  } else {
    out["best"] = nullptr;
    out["c_estimate"] = nullptr;
  }
  return out;
}

json to_json(const RoundRecord& r) {
  json shorts = json::array();
  for (const ShortVectorRecord& s : r.short_vectors) {
    json a = json::array(), b = json::array();
    for (const Integer& c : s.a) a.push_back(to_json(c));
    for (const Integer& c : s.b) b.push_back(to_json(c));
    shorts.push_back({{"a", a}, {"b", b}, {"H", s.height}});
  }
  json votes = json::object();
  for (const auto& [place, vote] : r.votes) votes[std::to_string(place)] = to_string(vote);
  json floors = json::object(), theory = json::object();
  for (const auto& [place, f] : r.ratio_floors) floors[std::to_string(place)] = f;
  for (const auto& [place, f] : r.theory_floors) theory[std::to_string(place)] = f;
  json tracked = nullptr;
  if (r.tracked) {
    json a = json::array(), b = json::array();
    for (const Integer& c : r.tracked->a) a.push_back(to_json(c));
    for (const Integer& c : r.tracked->b) b.push_back(to_json(c));
    tracked = {{"a", a}, {"b", b}, {"H", r.tracked->height}};
  }
  return {{"n", r.n},
          {"A", to_json(r.a)},
          {"B", to_json(r.b)},
          {"A_exact", {to_json(r.a.center), to_json(r.a.radius)}},
          {"B_exact", {to_json(r.b.center), to_json(r.b.radius)}},
          {"t_n", r.t_n},
          {"phase", r.phase},
          {"short_vectors", shorts},
          {"tracked", tracked},
          {"votes", votes},
          {"side", to_string(r.side)},
          {"ratio_floors", floors},
          {"theory_floors", theory},
          {"guarantee_ok", r.guarantee_ok},
          {"episode_complete", r.episode_complete},
          {"independent_short", r.independent_short},
          {"systole", r.systole},
          {"notes", r.notes}};
}

json to_json(const Transcript& t) {
  json rounds = json::array();
  for (const RoundRecord& r : t.rounds) rounds.push_back(to_json(r));
  json bounds = json::object();
  for (const auto& [place, mm] : t.derivative_bounds) bounds[std::to_string(place)] = {mm.first, mm.second};
  return {{"params", to_json(t.params)},
          {"player_a", t.player_a},
          {"player_b", t.player_b},
          {"rounds", rounds},
          {"x_inf", to_json(t.x_inf)},
          {"x_inf_exact", {to_json(t.x_inf.center), to_json(t.x_inf.radius)}},
          {"systole_floor", t.systole_floor},
          {"episodes", t.episodes},
          {"preprocessing_rounds", t.preprocessing_rounds},
          {"preprocessing_failed", t.preprocessing_failed},
          {"vote_overruns", t.vote_overruns},
          {"derivative_bounds", bounds},
          {"forfeit", t.forfeit},
          {"forfeit_reason", t.forfeit_reason},
          {"legality_violations", legality_violations(t)},
          {"verification", t.verification ? to_json(*t.verification) : json(nullptr)}};
}

json to_json(const CounterexampleReport& r) {
  json rows = json::array();
  for (const DecayRow& row : r.rows)
    rows.push_back({{"x", row.x}, {"t", row.t}, {"H", row.height}, {"closed_form", row.closed_form}});
  json tree = json::array();
  for (const TreeLevel& l : r.tree) tree.push_back({{"depth", l.depth}, {"t", l.t}, {"best_systole", l.best_systole}});
  return {{"rows", rows},
          {"max_deviation", r.max_deviation},
          {"threshold", r.threshold},
          {"decay_time", optional_json(r.decay_time)},
          {"tree", tree},
          {"best_path_floor", r.best_path_floor}};
}

json to_json(const SweepEntry& e) {
  json w = json::array();
  for (const Rational& q : e.weights) w.push_back(to_json(q));
  return {{"weights", w},
          {"fastest_place", e.fastest_place},
          {"hypothesis_violated", e.hypothesis_violated},
          {"legality_violations", e.violations},
          {"transcript", to_json(e.transcript)}};
}

json field_info(const NumberField& field) {
  json places = json::array();
  for (const Place& p : field.places())
    places.push_back({{"kind", p.is_real() ? "real" : "complex"},
                      {"exponent", p.exponent()},
                      {"root", to_json(p.root)},
                      {"isolation_radius", p.isolation_radius}});
  json units = json::array();
  for (const AlgebraicInteger& u : field.units()) {
    const Real pf = field.product_formula(u);
    const Real residual = abs(pf - Real(1L, pf.prec()));
    units.push_back({{"coeffs", to_json(u)},
                     {"text", u.to_string()},
                     {"log_embedding", field.unit_log_embedding(u)},
                     {"product_formula", to_json(pf)},
                     {"residual", residual.upper()}});
  }
  const IntegerMatrix m = field.multiplication_matrix(field.generator());
  json companion = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_json(m(i, j)));
    companion.push_back(row);
  }
  json minpoly = json::array();
  for (const Integer& c : field.minpoly().coeffs()) minpoly.push_back(to_json(c));
  return {{"label", field.label()},
          {"minpoly", minpoly},
          {"minpoly_text", field.minpoly().to_string()},
          {"degree", field.degree()},
          {"real_places", field.real_places()},
          {"complex_places", field.complex_places()},
          {"precision", field.precision()},
          {"places", places},
          {"units", units},
          {"companion", companion},
          {"vandermonde_residual", field.vandermonde_residual(field.generator())},
          {"renormalization_constant", field.renormalization_constant()}};
}

std::string profile_csv(const std::vector<ProfilePoint>& profile) {
  std::ostringstream os;
  os << "t,systole,systole_radius,systole_lower,min_norm,certified\n";
  for (const ProfilePoint& p : profile)
    os << g17(p.t) << ',' << g17(p.systole.height.mid()) << ',' << g17(p.systole.height.rad()) << ','
       << g17(p.systole.height.lower()) << ',' << g17(p.systole.min_norm.mid()) << ','
       << (p.systole.certified ? 1 : 0) << '\n';
  return os.str();
}

NumberField field_from_json(const json& j, Precision prec) {
  if (!j.is_object() || !j.contains("minpoly")) throw std::invalid_argument("field config needs a minpoly list");
  const auto minpoly = j.at("minpoly").get<std::vector<long>>();
  std::optional<std::vector<std::vector<long>>> units;
  if (j.contains("units") && !j.at("units").is_null()) units = j.at("units").get<std::vector<std::vector<long>>>();
  if (j.contains("basis") && j.at("basis") != "power")
    throw std::invalid_argument("only the power basis Z[xi] is supported as the ring of integers");
  return parse_field(minpoly, units, j.value("label", std::string{}), prec);
}

Curve curve_from_json(const json& j) {
  if (!j.is_object() || !j.contains("components")) throw std::invalid_argument("curve config needs components");
  std::vector<Polynomial> comps;
  for (const json& c : j.at("components")) {
    std::vector<Rational> re, im;
    if (c.is_array()) {
      for (const json& x : c) re.push_back(parse_rational(x));
    } else if (c.is_object()) {
      for (const json& x : c.value("re", json::array())) re.push_back(parse_rational(x));
      for (const json& x : c.value("im", json::array())) im.push_back(parse_rational(x));
    } else {
      throw std::invalid_argument("curve component must be a coefficient list or {re, im}");
    }
    comps.emplace_back(re, im);
  }
  std::optional<std::vector<int>> active;
  if (j.contains("active") && !j.at("active").is_null()) active = j.at("active").get<std::vector<int>>();
  return Curve(comps, active);
}

FlowSpec flow_from_json(const json& j, int places) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "equal")) return FlowSpec::equal(places);
  if (!j.is_array()) throw std::invalid_argument("flow must be \"equal\" or a list of weights");
  std::vector<Rational> w;
  for (const json& x : j) w.push_back(parse_rational(x));
  if (static_cast<int>(w.size()) != places) throw std::invalid_argument("one weight per place is required");
  return FlowSpec::weighted(w);
}

GameParams params_from_json(const json& j) {
  GameParams p;
  if (j.is_null()) return p;
  if (j.contains("alpha")) p.alpha = parse_rational(j.at("alpha"));
  if (j.contains("beta")) p.beta = parse_rational(j.at("beta"));
  if (j.contains("rho")) p.rho = parse_rational(j.at("rho"));
  if (j.contains("x0")) p.x0 = parse_rational(j.at("x0"));
  p.rounds = j.value("rounds", p.rounds);
  p.seed = j.value("seed", p.seed);
  p.max_votes = j.value("max_votes", p.max_votes);
  p.preprocess_limit = j.value("preprocess_limit", p.preprocess_limit);
  p.validate();
  return p;
}

PointKS point_from_json(const json& j, const NumberField& field) {
  const Precision prec = field.precision();
  if (j.contains("element")) {
    const auto c = j.at("element").get<std::vector<long>>();
    if (static_cast<int>(c.size()) != field.degree()) throw std::invalid_argument("element needs d coefficients");
    return field_point(field, AlgebraicInteger(std::vector<Integer>(c.begin(), c.end())));
  }
  if (j.contains("constant")) return constant_point(field, parse_real(j.at("constant"), prec));
  if (j.contains("places")) {
    const json& ps = j.at("places");
    if (static_cast<int>(ps.size()) != field.place_count()) throw std::invalid_argument("one value per place");
    PointKS out;
    for (int s = 0; s < field.place_count(); ++s) {
      const json& v = ps.at(s);
      if (v.is_array()) {
        if (field.place(s).is_real() && parse_real(v.at(1), prec).is_zero() == false)
          throw std::invalid_argument("a real place needs a real value");
        out.emplace_back(parse_real(v.at(0), prec), parse_real(v.at(1), prec));
      } else {
        out.emplace_back(parse_real(v, prec));
      }
    }
    return out;
  }
  throw std::invalid_argument("point must give element, constant or places");
}

EnumerationOptions enumeration_from_json(const json& j) {
  EnumerationOptions o;
  if (j.is_null()) return o;
  const std::string mode = j.value("mode", std::string("box"));
  if (mode == "box")
    o.mode = EnumerationMode::box;
  else if (mode == "reduced")
    o.mode = EnumerationMode::reduced;
  else
    throw std::invalid_argument("enumeration mode must be box or reduced");
  o.coeff_box = j.value("coeff_box", o.coeff_box);
  o.reduced_cap = j.value("reduced_cap", o.reduced_cap);
  if (o.coeff_box < 1 || o.reduced_cap < 1) throw std::invalid_argument("enumeration bounds must be positive");
  return o;
}

VerifyOptions verify_from_json(const json& j) {
  VerifyOptions v;
  if (j.is_null()) return v;
  v.q_bound = j.value("q_bound", v.q_bound);
  v.t_max = j.value("t_max", v.t_max);
  v.step = j.value("step", v.step);
  v.floor_threshold = j.value("floor_threshold", v.floor_threshold);
  if (j.contains("enumeration")) v.enumeration = enumeration_from_json(j.at("enumeration"));
  return v;
}

}  // namespace badk::io
