#pragma once

#include <functional>

namespace jtvol {

// Adaptive Simpson integration with Richardson acceptance test.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double rel_tol);

// Int_0^inf rho(E) e^{-beta E} dE for the JT disc density
// rho = (e^S/4pi^2) sinh(2 pi sqrt E), via the substitution E = x^2 (the
// integrand becomes entire) with the truncation point chosen so the
// discarded tail is analytically below tolerance.
double disc_partition_by_quadrature(double beta, double S, double rel_tol = 1e-9);

// Same for the super density (e^S sqrt2/pi) cosh(2 pi sqrt E)/sqrt E;
// the E^{-1/2} edge disappears under the substitution.
double super_partition_by_quadrature(double beta, double S, double rel_tol = 1e-9);

}  // namespace jtvol
