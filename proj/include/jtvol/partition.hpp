#pragma once

#include <vector>

#include "jtvol/volumes.hpp"

namespace jtvol {

// One term coeff * beta^{beta_power_x2 / 2} [* exp(pi^2/beta)] of a
// partition function, under a global prefactor e^{S*chi} / sqrt(pi).
struct ClosedFormTerm {
    int beta_power_x2;  // twice the (half-integer) beta power
    ExactScalar coeff;
    bool has_exp_pi2_over_beta;
};

struct PartitionClosedForm {
    int chi = 1;  // entropy weight exponent: overall factor e^{S*chi}
    std::vector<ClosedFormTerm> terms;

    double evaluate(double beta, double S) const;
};

// Disc: e^S exp(pi^2/beta) / (4 sqrt(pi) beta^{3/2}).
PartitionClosedForm disc_closed_form();
double disc_partition(double beta, double S);

// Trumpet Theta(b; beta) = exp(-b^2/(4 beta)) / (2 sqrt(pi beta)).
double trumpet(double b, double beta);

// Z_g(beta) = e^{S(1-2g)} Int_0^inf b db Theta(b;beta) V_{g,1}(b), done in
// closed form with Int_0^inf b^{2k+1} e^{-b^2/4beta} db = k! (4 beta)^{k+1} / 2.
PartitionClosedForm genus_partition_gluing_form(const VolumePolynomial& v_g1);

// Same quantity from w_{g,1} directly: the density correction
// rho_g(E) = -(1/pi) Im[w_{g,1}/dx] at z = i sqrt(E), Laplace-transformed
// termwise with the Gamma-continued integral
// Int_0^inf E^{-k-3/2} e^{-beta E} dE = Gamma(-k-1/2) beta^{k+1/2}.
// Agreement with the gluing form (constant exactly 1) is the gluing
// consistency check.
PartitionClosedForm genus_partition_correlator_form(const Correlator& w_g1);

double genus_partition_via_gluing(int g, double beta, double S, RecursionEngine& engine);
double genus_partition_via_correlator(int g, double beta, double S, RecursionEngine& engine);

// rho_super(E) = e^S sqrt2 cosh(2 pi sqrt E) / (pi sqrt E).
double super_disc_density(double E, double S);

}  // namespace jtvol
