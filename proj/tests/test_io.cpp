#include "badk/io.hpp"

#include "doctest.h"
#include "fields.hpp"

using namespace badk;
using io::json;

TEST_CASE("rationals parse exactly") {
  CHECK(io::parse_rational(json(3)) == 3);
  CHECK(io::parse_rational(json("2/3")) == Rational(2, 3));
  CHECK(io::parse_rational(json("4/6")) == Rational(2, 3));
  CHECK(io::parse_rational(json("0.25")) == Rational(1, 4));
  CHECK(io::parse_rational(json("-1.5e-2")) == Rational(-3, 200));
  CHECK(io::parse_rational(json("12e3")) == 12000);
  CHECK(io::parse_rational(json(0.5)) == Rational(1, 2));
  CHECK_THROWS_AS(io::parse_rational(json("abc")), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_rational(json("1/0")), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_rational(json::array()), std::invalid_argument);
}

TEST_CASE("reals parse to enclosures") {
  const Real third = io::parse_real(json("1/3"), kDefaultPrecision);
  CHECK(third.contains(Real(Rational(1, 3), kDefaultPrecision)));
  CHECK(third.rad() < 1e-35);
  CHECK(io::parse_real(json("0.1"), kDefaultPrecision).contains(Real(Rational(1, 10), kDefaultPrecision)));
  CHECK(io::parse_real(json(2), kDefaultPrecision).is_exact());
}

TEST_CASE("configs build fields, curves, flows and points") {
  const NumberField k = io::field_from_json(json::parse(R"({"minpoly": [-2, 0], "label": "K"})"), 256);
  CHECK(k.degree() == 2);
  CHECK(k.precision() == 256);
  CHECK(k.label() == "K");
  CHECK_THROWS_AS(io::field_from_json(json::parse(R"({"minpoly": [-4, 0]})"), 128), std::invalid_argument);
  CHECK_THROWS_AS(io::field_from_json(json::parse(R"({"minpoly": [-2, 0], "basis": "maximal"})"), 128),
                  std::invalid_argument);

  const Curve c = io::curve_from_json(json::parse(R"({"components": [[0, "1/2"], {"re": [0, 0, 1]}]})"));
  CHECK(c.component(0).re()[1] == Rational(1, 2));
  CHECK(c.component(1).degree() == 2);
  CHECK(c.active() == std::vector<int>{0, 1});

  CHECK(io::flow_from_json(json("equal"), 2).is_equal_weight());
  const FlowSpec w = io::flow_from_json(json::parse(R"(["2/3", "1/3"])"), 2);
  CHECK(w.weight(0) == Rational(2, 3));
  CHECK_THROWS_AS(io::flow_from_json(json::parse(R"(["1/2", "1/3"])"), 2), std::invalid_argument);
  CHECK_THROWS_AS(io::flow_from_json(json::parse(R"(["1/2"])"), 2), std::invalid_argument);

  const PointKS x = io::point_from_json(json::parse(R"({"element": [0, 1]})"), k);
  CHECK(x[0].re.mid() == doctest::Approx(std::sqrt(2.0)));
  CHECK(x[1].re.mid() == doctest::Approx(-std::sqrt(2.0)));
  const PointKS y = io::point_from_json(json::parse(R"({"places": ["0.5", -1]})"), k);
  CHECK(y[1].re.contains(-1.0));
  CHECK_THROWS_AS(io::point_from_json(json::parse(R"({"places": [1]})"), k), std::invalid_argument);

  const GameParams p = io::params_from_json(json::parse(R"({"alpha": "1/3", "rounds": 7, "seed": 9})"));
  CHECK(p.alpha == Rational(1, 3));
  CHECK(p.rounds == 7);
  CHECK(p.seed == 9u);
  CHECK_THROWS_AS(io::params_from_json(json::parse(R"({"alpha": "3/4"})")), std::invalid_argument);

  CHECK(io::enumeration_from_json(json::parse(R"({"mode": "reduced"})")).mode == EnumerationMode::reduced);
  CHECK_THROWS_AS(io::enumeration_from_json(json::parse(R"({"mode": "sieve"})")), std::invalid_argument);
}

TEST_CASE("transcript JSON follows the documented layout") {
  const GameSetup setup(testing_fields::sqrt2(), Curve::linear({1, 1}), FlowSpec::equal(2), [] {
    GameParams p;
    p.rounds = 6;
    return p;
  }());
  auto a = random_adversary(1);
  auto b = shielding_strategy();
  Transcript t = play_game(setup, *a, *b);
  VerifyOptions vo;
  vo.q_bound = 5;
  vo.t_max = 2;
  t.verification = verify_outcome(setup, t, vo);
  const json j = io::to_json(t);
  REQUIRE(j.at("rounds").size() == 6u);
  const json& r0 = j.at("rounds").at(0);
  CHECK(r0.at("n") == 0);
  CHECK(r0.at("A").size() == 2u);
  CHECK(r0.at("B").at(1).get<double>() == doctest::Approx(0.125));
  CHECK(r0.at("t_n").is_number());
  CHECK(r0.at("short_vectors").is_array());
  CHECK(r0.at("votes").is_object());
  const std::string side = r0.at("side");
  CHECK((side == "L" || side == "R" || side == "center"));
  CHECK(j.at("x_inf").size() == 2u);
  CHECK(j.at("verification").at("c_estimate").contains("radius"));
  CHECK(j.at("legality_violations").empty());

  // identical inputs give byte-identical output
  auto a2 = random_adversary(1);
  auto b2 = shielding_strategy();
  Transcript t2 = play_game(setup, *a2, *b2);
  t2.verification = verify_outcome(setup, t2, vo);
  CHECK(io::to_json(t2).dump() == j.dump());
}

TEST_CASE("field info and CSV") {
  const json info = io::field_info(testing_fields::sqrt2());
  CHECK(info.at("real_places") == 2);
  CHECK(info.at("units").at(0).at("residual").get<double>() < 1e-20);
  CHECK(info.at("companion").size() == 2u);
  CHECK(info.at("vandermonde_residual").get<double>() < 1e-9);

  const NumberField q = testing_fields::sqrt2();
  const auto profile = trajectory_profile(q, GroupElement::identity(q), FlowSpec::equal(2), {0.0, 0.5});
  const std::string csv = io::profile_csv(profile);
  CHECK(csv.rfind("t,systole,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  CHECK(csv.find("0.36787944117144233") != std::string::npos);
}
