#pragma once

#include <json.hpp>

#include "jtvol/exact_scalar.hpp"
#include "jtvol/trunc_series.hpp"

namespace jtvol {

// Deterministic JSON throughout: insertion-ordered objects, integers as
// decimal strings so consumers never overflow.
using Json = nlohmann::ordered_json;

// {"terms":[{"pi_exp":int,"num":"...","den":"...","sqrt2":bool}, ...]}
// Terms sorted by (pi_exp, sqrt2); bit-exact round trip.
Json scalar_to_json(const ExactScalar& x);
ExactScalar scalar_from_json(const Json& j);

Json series_to_json(const TruncSeries& s);

}  // namespace jtvol
