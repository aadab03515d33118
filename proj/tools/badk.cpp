// badk: number-field Diophantine approximation, diagonal flows and
// Schmidt games from JSON configs.
#include "badk/io.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace badk;
using io::json;

namespace {

struct Options {
  std::string config;
  std::string out;
  long precision = 0;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct Result {
  std::string text;
  bool ok = true;
};

json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  return json::parse(in);
}

const json& need(const json& cfg, const char* key) {
  if (!cfg.contains(key)) throw std::invalid_argument(std::string("config is missing \"") + key + "\"");
  return cfg.at(key);
}

json field_config(const json& cfg) { return cfg.contains("field") ? cfg.at("field") : cfg; }

std::vector<double> grid(double t_max, double step) {
  if (!(step > 0 && t_max >= 0)) throw std::invalid_argument("time grid needs step > 0 and t_max >= 0");
  std::vector<double> out;
  const long n = static_cast<long>(std::floor(t_max / step + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(static_cast<double>(i) * step);
  return out;
}

GameParams game_params(const json& cfg, const Options& opt) {
  GameParams p = io::params_from_json(cfg.value("game", json(nullptr)));
  if (opt.seed) p.seed = *opt.seed;
  return p;
}

void check_curve(const NumberField& field, const Curve& curve, const FlowSpec& spec) {
  if (curve.place_count() != field.place_count()) throw std::invalid_argument("curve needs one component per place");
  if (spec.is_equal_weight() && !curve.satisfies_dimension_condition(field))
    throw std::invalid_argument("active places fail #real + 2 #complex > floor(d/2)");
}

Result cmd_field_info(const json& cfg, Precision prec, const Options&) {
  return {io::field_info(io::field_from_json(field_config(cfg), prec)).dump(2) + "\n"};
}

Result cmd_trajectory(const json& cfg, Precision prec, const Options&) {
  const NumberField field = io::field_from_json(need(cfg, "field"), prec);
  const PointKS x = io::point_from_json(need(cfg, "point"), field);
  const FlowSpec spec = io::flow_from_json(cfg.value("flow", json(nullptr)), field.place_count());
  const auto opts = io::enumeration_from_json(cfg.value("enumeration", json(nullptr)));
  const auto profile =
      trajectory_profile(field, unipotent(x), spec, grid(cfg.value("t_max", 8.0), cfg.value("step", 0.25)), opts);
  return {io::profile_csv(profile)};
}

Result cmd_bad_check(const json& cfg, Precision prec, const Options&) {
  const NumberField field = io::field_from_json(need(cfg, "field"), prec);
  const PointKS x = io::point_from_json(need(cfg, "point"), field);
  BadOptions bad;
  bad.q_bound = cfg.value("q_bound", bad.q_bound);
  bad.q_min = cfg.value("q_min", bad.q_min);
  bad.coeff_box = cfg.value("coeff_box", bad.coeff_box);
  bad.exhaustive_p = cfg.value("exhaustive_p", bad.exhaustive_p);
  bad.p_box = cfg.value("p_box", bad.p_box);
  if (!cfg.contains("dani")) return {io::to_json(bad_constant_estimate(field, x, bad)).dump(2) + "\n"};
  const json& d = cfg.at("dani");
  DaniOptions dani;
  dani.t_max = d.value("t_max", dani.t_max);
  dani.step = d.value("step", dani.step);
  dani.floor_threshold = d.value("floor_threshold", dani.floor_threshold);
  dani.enumeration = io::enumeration_from_json(d.value("enumeration", json(nullptr)));
  dani.bad = bad;
  return {io::to_json(dani_check(field, x, FlowSpec::equal(field.place_count()), dani)).dump(2) + "\n"};
}

Result cmd_play(const json& cfg, Precision prec, const Options& opt) {
  const NumberField field = io::field_from_json(need(cfg, "field"), prec);
  const Curve curve = io::curve_from_json(need(cfg, "curve"));
  const FlowSpec spec = io::flow_from_json(cfg.value("flow", json(nullptr)), field.place_count());
  check_curve(field, curve, spec);
  const GameSetup setup(field, curve, spec, game_params(cfg, opt));
  const VerifyOptions verify = io::verify_from_json(cfg.value("verify", json(nullptr)));
  const bool verify_on = cfg.value("run_verification", true);

  std::vector<std::string> strategies;
  const json s = cfg.value("strategy", json("shielding"));
  if (s.is_array())
    strategies = s.get<std::vector<std::string>>();
  else
    strategies.push_back(s.get<std::string>());

  json adversaries = cfg.value("adversaries", json::array({"random"}));
  json transcripts = json::array();
  bool ok = true;
  for (const std::string& strategy : strategies)
    for (const json& adv : adversaries) {
      const std::string name = adv.is_string() ? adv.get<std::string>() : adv.at("name").get<std::string>();
      const std::uint64_t seed = adv.is_object() ? adv.value("seed", setup.params.seed) : setup.params.seed;
      auto a = make_adversary(name, seed);
      auto b = make_strategy(strategy);
      if (!opt.quiet) std::cerr << "play: " << b->name() << " vs " << a->name() << "\n";
      Transcript t = play_game(setup, *a, *b);
      if (verify_on) t.verification = verify_outcome(setup, t, verify);
      if (!legality_violations(t).empty()) ok = false;
      transcripts.push_back(io::to_json(t));
    }
  return {json{{"transcripts", transcripts}}.dump(2) + "\n", ok};
}

Result cmd_counterexample(const json& cfg, Precision prec, const Options& opt) {
  const json fc = cfg.value("field", json{{"minpoly", {-1, -3, 0}}, {"units", {{0, 1, 0}, {1, 1, 0}}}, {"label", "x^3-3x-1"}});
  const NumberField field = io::field_from_json(fc, prec);
  const CounterexampleReport r = counterexample_demo(field, cfg.value("t_max", 8.0), cfg.value("x_step", 0.01),
                                                     cfg.value("t_step", 0.25), cfg.value("tree_depth", 4),
                                                     game_params(cfg, opt));
  return {io::to_json(r).dump(2) + "\n"};
}

Result cmd_weight_sweep(const json& cfg, Precision prec, const Options& opt) {
  const NumberField field = io::field_from_json(need(cfg, "field"), prec);
  const Curve curve = io::curve_from_json(need(cfg, "curve"));
  std::vector<std::vector<Rational>> weights;
  for (const json& w : need(cfg, "weights")) {
    std::vector<Rational> row;
    for (const json& x : w) row.push_back(io::parse_rational(x));
    weights.push_back(row);
  }
  const auto entries = badk::weight_sweep(field, curve, weights, game_params(cfg, opt),
                                          cfg.value("adversary", std::string("random")),
                                          io::verify_from_json(cfg.value("verify", json(nullptr))));
  json out = json::array();
  bool ok = true;
  for (const SweepEntry& e : entries) {
    if (!e.violations.empty()) ok = false;
    out.push_back(io::to_json(e));
  }
  return {json{{"entries", out}}.dump(2) + "\n", ok};
}

Precision starting_precision(const Options& opt) {
  long bits = static_cast<long>(kDefaultPrecision);
  if (const char* env = std::getenv("BADK_PRECISION")) bits = std::stol(env);
  if (opt.precision > 0) bits = opt.precision;
  if (bits < 53 || bits > static_cast<long>(kMaxPrecision))
    throw std::invalid_argument("precision must lie in [53, " + std::to_string(kMaxPrecision) + "] bits");
  return static_cast<Precision>(bits);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Diophantine approximation over number fields: heights, flows, bad constants, Schmidt games"};
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_option("--config", opt.config, "JSON config file");
  app.add_option("--out", opt.out, "output file (default: stdout)");
  app.add_option("--precision", opt.precision, "working precision in bits (default 128 or $BADK_PRECISION)");
  app.add_option("--seed", opt.seed, "seed override for randomized adversaries");
  app.add_flag("--quiet", opt.quiet, "suppress progress messages");

  using Command = std::function<Result(const json&, Precision, const Options&)>;
  const std::vector<std::tuple<std::string, std::string, Command>> commands{
      {"field-info", "places, units, companion matrix and residuals", cmd_field_info},
      {"trajectory", "systole profile along the flow (CSV)", cmd_trajectory},
      {"bad-check", "bad-constant estimate and optional Dani check (JSON)", cmd_bad_check},
      {"play", "Schmidt games with transcripts and verification (JSON)", cmd_play},
      {"counterexample", "decay table and game tree for the cubic counterexample (JSON)", cmd_counterexample},
      {"weight-sweep", "weighted games over a list of weights (JSON)", cmd_weight_sweep},
  };
  std::vector<CLI::App*> subs;
  for (const auto& [name, help, fn] : commands) subs.push_back(app.add_subcommand(name, help));

  CLI11_PARSE(app, argc, argv);

  try {
    std::size_t which = 0;
    while (!subs[which]->parsed()) ++which;
    const Command& run = std::get<2>(commands[which]);
    const json cfg = opt.config.empty() ? json::object() : load(opt.config);

    Result result;
    for (Precision prec = starting_precision(opt);; prec *= 2) {
      try {
        result = run(cfg, prec, opt);
        break;
      } catch (const PrecisionError& e) {
        if (prec * 2 > kMaxPrecision) throw;
        if (!opt.quiet) std::cerr << "precision " << prec << " bits insufficient (" << e.what() << "), retrying\n";
      }
    }

    if (opt.out.empty()) {
      std::cout << result.text;
    } else {
      std::ofstream out(opt.out);
      if (!out) throw std::invalid_argument("cannot write " + opt.out);
      out << result.text;
    }
    if (!result.ok) {
      std::cerr << "validation failed: see legality_violations in the output\n";
      return 1;
    }
    return 0;
  } catch (const PrecisionError& e) {
    std::cerr << "precision exhausted at " << kMaxPrecision << " bits: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
