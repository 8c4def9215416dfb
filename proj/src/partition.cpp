#include "jtvol/partition.hpp"

#include <cmath>
#include <stdexcept>

#include "jtvol/numeric.hpp"

namespace jtvol {

double PartitionClosedForm::evaluate(double beta, double S) const {
    if (!(beta > 0.0)) throw std::domain_error("partition: requires beta > 0");
    double acc = 0.0;
    for (const auto& t : terms) {
        double term = evaluate_numeric(t.coeff) * std::pow(beta, 0.5 * t.beta_power_x2);
        if (t.has_exp_pi2_over_beta) term *= std::exp(M_PI * M_PI / beta);
        acc += term;
    }
    return std::exp(S * chi) / std::sqrt(M_PI) * acc;
}

PartitionClosedForm disc_closed_form() {
    PartitionClosedForm f;
    f.chi = 1;
    f.terms.push_back({-3, ExactScalar::term(Rational(1, 4), 0, false), true});
    return f;
}

double disc_partition(double beta, double S) {
    if (!(beta > 0.0)) throw std::domain_error("disc_partition: requires beta > 0");
    return disc_closed_form().evaluate(beta, S);
}

double trumpet(double b, double beta) {
    if (!(beta > 0.0)) throw std::domain_error("trumpet: requires beta > 0");
    if (b < 0.0) throw std::domain_error("trumpet: requires b >= 0");
    return std::exp(-b * b / (4.0 * beta)) / (2.0 * std::sqrt(M_PI * beta));
}

PartitionClosedForm genus_partition_gluing_form(const VolumePolynomial& v_g1) {
    if (v_g1.n() != 1) throw std::invalid_argument("gluing form: needs a one-boundary volume");
    if (v_g1.g() < 1) throw std::invalid_argument("gluing form: g = 0 handled by the disc");
    PartitionClosedForm f;
    f.chi = 1 - 2 * v_g1.g();
    for (const auto& [d, c] : v_g1.terms()) {
        int k = d[0];
        // b-moment against the trumpet: v_k b^{2k} -> v_k k! 4^k beta^{k+1/2} / sqrt(pi)
        Rational scale = factorial(k) * pow2(2 * k);
        f.terms.push_back({2 * k + 1, c.scaled(scale), false});
    }
    return f;
}

PartitionClosedForm genus_partition_correlator_form(const Correlator& w_g1) {
    if (w_g1.key().n != 1) throw std::invalid_argument("correlator form: needs n = 1");
    if (w_g1.key().g < 1) throw std::invalid_argument("correlator form: g = 0 handled by the disc");
    PartitionClosedForm f;
    f.chi = 1 - 2 * w_g1.key().g;
    for (const auto& [d, c] : w_g1.terms()) {
        int k = d[0];
        // Gamma(-k-1/2)/sqrt(pi) by downward recurrence from Gamma(1/2)
        Rational gamma_hat(1);
        for (int j = 0; j <= k; ++j) gamma_hat *= Rational(-2, 2 * j + 1);
        Rational scale = gamma_hat / Rational(2);
        if (k % 2 == 0) scale = -scale;  // the (-1)^{k+1} of the continued density
        f.terms.push_back({2 * k + 1, c.scaled(scale), false});
    }
    return f;
}

double genus_partition_via_gluing(int g, double beta, double S, RecursionEngine& engine) {
    if (g < 1) throw std::invalid_argument("genus partition: g >= 1 (disc handled separately)");
    VolumePolynomial v = VolumePolynomial::from_correlator(engine.correlator(g, 1));
    return genus_partition_gluing_form(v).evaluate(beta, S);
}

double genus_partition_via_correlator(int g, double beta, double S, RecursionEngine& engine) {
    if (g < 1) throw std::invalid_argument("genus partition: g >= 1 (disc handled separately)");
    return genus_partition_correlator_form(engine.correlator(g, 1)).evaluate(beta, S);
}

double super_disc_density(double E, double S) {
    if (!(E > 0.0)) throw std::domain_error("super_disc_density: requires E > 0");
    return std::exp(S) * std::sqrt(2.0) * std::cosh(2.0 * M_PI * std::sqrt(E)) /
           (M_PI * std::sqrt(E));
}

}  // namespace jtvol
