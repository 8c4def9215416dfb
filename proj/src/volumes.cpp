#include "jtvol/volumes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "jtvol/numeric.hpp"

namespace jtvol {

VolumePolynomial VolumePolynomial::from_correlator(const Correlator& w) {
    Terms terms;
    for (const auto& [k, c] : w.terms()) {
        Rational scale(1);
        for (int ki : k) scale /= factorial(2 * ki + 1);
        terms.emplace(k, c.scaled(scale));
    }
    return VolumePolynomial(w.key().g, w.key().n, std::move(terms));
}

int VolumePolynomial::total_degree() const {
    int best = -1;
    for (const auto& [d, c] : terms_)
        best = std::max(best, std::accumulate(d.begin(), d.end(), 0));
    return best;
}

const ExactScalar* VolumePolynomial::find(const std::vector<int>& sorted_degrees) const {
    auto it = terms_.find(sorted_degrees);
    return it == terms_.end() ? nullptr : &it->second;
}

double VolumePolynomial::evaluate(const std::vector<double>& b, int digits) const {
    if (static_cast<int>(b.size()) != n_)
        throw std::invalid_argument("evaluate_volume: expected " + std::to_string(n_) +
                                    " boundary lengths, got " + std::to_string(b.size()));
    for (double x : b)
        if (x < 0.0) throw std::invalid_argument("evaluate_volume: boundary lengths must be >= 0");
    double total = 0.0;
    for (const auto& [d, c] : terms_) {
        double coeff = evaluate_numeric(c, digits);
        std::vector<int> perm = d;
        double sym = 0.0;
        do {
            double m = 1.0;
            for (size_t i = 0; i < perm.size(); ++i) m *= std::pow(b[i], 2 * perm[i]);
            sym += m;
        } while (std::next_permutation(perm.begin(), perm.end()));
        total += coeff * sym;
    }
    return total;
}

Rational VolumePolynomial::convention_factor(const std::string& convention) const {
    if (convention == "jt") return Rational(1);
    if (convention == "mirzakhani") return (g_ == 1 && n_ == 1) ? Rational(2) : Rational(1);
    throw std::invalid_argument("unknown volume convention '" + convention + "'");
}

Json VolumePolynomial::to_json(const std::string& convention) const {
    Rational f = convention_factor(convention);
    Json j;
    j["g"] = g_;
    j["n"] = n_;
    j["convention"] = convention;
    Json terms = Json::array();
    for (const auto& [d, c] : terms_) {
        Json t;
        t["degrees"] = d;
        t["coeff"] = scalar_to_json(c.scaled(f));
        terms.push_back(std::move(t));
    }
    j["terms"] = std::move(terms);
    return j;
}

std::string VolumePolynomial::to_csv(const std::string& convention) const {
    Rational f = convention_factor(convention);
    std::ostringstream os;
    os << "degrees,coeff_exact,coeff_numeric\n";
    for (const auto& [d, c] : terms_) {
        ExactScalar v = c.scaled(f);
        for (size_t i = 0; i < d.size(); ++i) os << (i ? " " : "") << d[i];
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", evaluate_numeric(v));
        os << ",\"" << v.str() << "\"," << buf << "\n";
    }
    return os.str();
}

}  // namespace jtvol
