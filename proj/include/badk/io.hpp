// JSON configs and reports, CSV time series.
#pragma once

#include "badk/diophantine.hpp"
#include "badk/game.hpp"
#include "badk/latticeflow.hpp"
#include "badk/numberfield.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace badk::io {

using nlohmann::json;

// integers, "p/q" strings and decimal strings are all exact
Rational parse_rational(const json& j);
// numbers are taken as exact doubles, strings as tight decimal enclosures
Real parse_real(const json& j, Precision prec);

json to_json(const Real& x);
json to_json(const Complex& z);
json to_json(const Rational& q);
json to_json(const Integer& n);
json to_json(const AlgebraicInteger& a);
json to_json(const Interval& i);
json to_json(const GameParams& p);
json to_json(const ApproximationWitness& w);
json to_json(const BadReport& r);
json to_json(const RoundRecord& r);
json to_json(const Transcript& t);
json to_json(const CounterexampleReport& r);
json to_json(const SweepEntry& e);

// places, units with product-formula residuals, companion matrix,
// Vandermonde residual of the generator and C
json field_info(const NumberField& field);

// time, systole enclosure, min_norm, certified flag
std::string profile_csv(const std::vector<ProfilePoint>& profile);

// {"minpoly": [c_0, ..., c_{d-1}], "units": [[...]], "label": "..."}
NumberField field_from_json(const json& j, Precision prec);
// {"components": [[a_0, a_1, ...] | {"re": [...], "im": [...]}], "active": [...]}
Curve curve_from_json(const json& j);
// "equal" or a list of rational weights
FlowSpec flow_from_json(const json& j, int places);
GameParams params_from_json(const json& j);
// {"element": [coeffs]} | {"constant": x} | {"places": [x | [re, im], ...]}
PointKS point_from_json(const json& j, const NumberField& field);
// {"mode": "box" | "reduced", "coeff_box": n, "reduced_cap": n}
EnumerationOptions enumeration_from_json(const json& j);
VerifyOptions verify_from_json(const json& j);

}  // namespace badk::io
