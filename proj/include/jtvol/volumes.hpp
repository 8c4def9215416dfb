#pragma once

#include <string>
#include <vector>

#include "jtvol/io.hpp"
#include "jtvol/recursion.hpp"

namespace jtvol {

// V_{g,n}(b_1..b_n) as a symmetric polynomial in the squared boundary
// lengths: a map from the sorted multi-degree (d_1..d_n) to the exact
// coefficient of prod b_i^{2 d_i} (per distinct arrangement, mirroring
// the correlator storage).
class VolumePolynomial {
public:
    using Terms = std::map<std::vector<int>, ExactScalar>;

    VolumePolynomial() = default;
    VolumePolynomial(int g, int n, Terms terms) : g_(g), n_(n), terms_(std::move(terms)) {}

    // Inverse-Laplace dictionary per term: c / z^{2k+2} <-> b^{2k} c / (2k+1)!
    static VolumePolynomial from_correlator(const Correlator& w);

    int g() const { return g_; }
    int n() const { return n_; }
    const Terms& terms() const { return terms_; }
    int total_degree() const;

    const ExactScalar* find(const std::vector<int>& sorted_degrees) const;

    double evaluate(const std::vector<double>& b, int digits = 20) const;

    // convention: "jt" (default normalization) or "mirzakhani", which
    // differs by a factor 2 at (g,n) = (1,1) only.
    Json to_json(const std::string& convention = "jt") const;
    std::string to_csv(const std::string& convention = "jt") const;

private:
    Rational convention_factor(const std::string& convention) const;
    int g_ = 0, n_ = 0;
    Terms terms_;
};

}  // namespace jtvol
