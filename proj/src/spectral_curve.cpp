#include "jtvol/spectral_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jtvol/numeric.hpp"

namespace jtvol {

SpectralCurve SpectralCurve::airy(const Rational& slope, int order) {
    if (slope.is_zero()) throw std::invalid_argument("airy curve: slope must be nonzero");
    if (order < 1) throw std::invalid_argument("airy curve: order must be >= 1");
    TruncSeries y(1, order, Parity::Odd);
    y.set_coeff(1, ExactScalar::from_rational(slope));
    return SpectralCurve(Kind::Airy, "airy:" + slope.str(), std::move(y), EdgeClass::Regular,
                         slope.sign() > 0 ? 1 : -1, slope);
}

SpectralCurve SpectralCurve::jt(int order) {
    if (order < 3) throw std::invalid_argument("jt curve: order must be >= 3");
    TruncSeries y(1, order, Parity::Odd);
    // sin(2 pi z)/(4 pi): coefficient of z^{2k+1} is (-1)^k 2^{2k-1} pi^{2k} / (2k+1)!
    for (int k = 0; 2 * k + 1 <= order; ++k) {
        Rational c = pow2(2 * k - 1) / factorial(2 * k + 1);
        if (k % 2 == 1) c = -c;
        y.set_coeff(2 * k + 1, ExactScalar::term(c, 2 * k, false));
    }
    return SpectralCurve(Kind::JT, "jt", std::move(y), EdgeClass::Regular, 1, Rational(0));
}

SpectralCurve SpectralCurve::jt_super(int order) {
    if (order < 3) throw std::invalid_argument("jt-super curve: order must be >= 3");
    TruncSeries y(-1, order, Parity::Odd);
    // sqrt2 cos(2 pi z)/z: coefficient of z^{2k-1} is sqrt2 (-1)^k 4^k pi^{2k} / (2k)!
    for (int k = 0; 2 * k - 1 <= order; ++k) {
        Rational c = pow2(2 * k) / factorial(2 * k);
        if (k % 2 == 1) c = -c;
        y.set_coeff(2 * k - 1, ExactScalar::term(c, 2 * k, true));
    }
    // Im y(i sqrt E) = -sqrt2 cosh(2 pi sqrt E)/sqrt E < 0
    return SpectralCurve(Kind::JTSuper, "jt-super", std::move(y), EdgeClass::Hard, -1, Rational(0));
}

double SpectralCurve::density_of_states(double E, const DensityParams& params) const {
    if (!(E > 0.0)) throw std::domain_error("density_of_states: requires E > 0");
    double w = std::exp(params.entropy_S);
    double u = std::sqrt(E);
    switch (kind_) {
        case Kind::Airy:
            return w * std::fabs(slope_.to_double()) * u / M_PI;
        case Kind::JT:
            return w * std::sinh(2.0 * M_PI * u) / (4.0 * M_PI * M_PI);
        case Kind::JTSuper:
            return w * std::sqrt(2.0) * std::cosh(2.0 * M_PI * u) / (M_PI * u);
    }
    throw std::logic_error("density_of_states: unknown curve kind");
}

double SpectralCurve::y_im_at_isqrtE(double E, int digits) const {
    if (!(E > 0.0)) throw std::domain_error("y_im_at_isqrtE: requires E > 0");
    double u = std::sqrt(E);
    double acc = 0.0;
    for (int e = y_.lo(); e <= y_.order(); ++e) {
        if (y_.coeff(e).is_zero()) continue;
        int k = (e - 1) / 2;  // e odd, possibly -1
        double term = evaluate_numeric(y_.coeff(e), digits) * std::pow(u, e);
        acc += (k % 2 != 0) ? -term : term;
    }
    return acc;
}

int required_series_order(int g, int n) {
    // Residues at (g, n) read 1/(4y) through z^{6g+2n-7}; the reciprocal
    // of a series with lowest exponent m costs 2m orders of trust.  The
    // curve constructors want at least order 3.
    return std::max(3, 6 * g + 2 * n - 5);
}

int default_series_order(int g_max) { return 2 * (3 * g_max - 1) + 3; }

}  // namespace jtvol
