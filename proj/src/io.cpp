#include "jtvol/io.hpp"

#include <stdexcept>

namespace jtvol {

Json scalar_to_json(const ExactScalar& x) {
    Json terms = Json::array();
    auto emit = [&terms](const ExactScalar::Part& part, bool sqrt2) {
        for (const auto& [e, q] : part) {
            Json t;
            t["pi_exp"] = e;
            t["num"] = q.num_str();
            t["den"] = q.den_str();
            t["sqrt2"] = sqrt2;
            terms.push_back(std::move(t));
        }
    };
    // Grouped rational-part-first; within each part the map order gives
    // ascending pi_exp.
    emit(x.rational_part(), false);
    emit(x.sqrt2_part(), true);
    Json j;
    j["terms"] = std::move(terms);
    return j;
}

ExactScalar scalar_from_json(const Json& j) {
    if (!j.contains("terms") || !j["terms"].is_array())
        throw std::invalid_argument("ExactScalar JSON: missing terms array");
    ExactScalar x;
    for (const auto& t : j["terms"]) {
        Rational q(Rational::from_string(t.at("num").get<std::string>()).numerator(),
                   Rational::from_string(t.at("den").get<std::string>()).numerator());
        x += ExactScalar::term(q, t.at("pi_exp").get<int>(), t.at("sqrt2").get<bool>());
    }
    return x;
}

Json series_to_json(const TruncSeries& s) {
    Json j;
    j["lowest_exponent"] = s.lo();
    j["truncation_order"] = s.order();
    j["parity"] = s.parity() == Parity::Even ? "even" : s.parity() == Parity::Odd ? "odd" : "none";
    Json coeffs = Json::array();
    for (int e = s.lo(); e <= s.order(); ++e) {
        if (s.coeff(e).is_zero()) continue;
        Json c;
        c["z_exp"] = e;
        c["value"] = scalar_to_json(s.coeff(e));
        coeffs.push_back(std::move(c));
    }
    j["coefficients"] = std::move(coeffs);
    return j;
}

}  // namespace jtvol
