#include "jtvol/quadrature.hpp"

#include <vector>

#include <cmath>
#include <stdexcept>

namespace jtvol {

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double eps, int depth) {
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = simpson(a, fa, m, fm, flm);
    double right = simpson(m, fm, b, fb, frm);
    double delta = left + right - whole;
    // The second acceptance clause is the double-precision floor: once
    // the discrepancy is rounding noise, further splitting cannot help.
    if (depth <= 0 || std::fabs(delta) <= 15.0 * eps ||
        std::fabs(delta) <= 1e-14 * (std::fabs(left) + std::fabs(right)))
        return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * eps, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, 0.5 * eps, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double rel_tol) {
    if (!(b > a)) throw std::invalid_argument("adaptive_simpson: empty interval");
    // Pilot scan: a fixed 64-panel pass sets the magnitude scale, so a
    // sharply peaked integrand cannot fool the error budget the way a
    // single 3-point estimate would.
    constexpr int kPanels = 64;
    double h = (b - a) / kPanels;
    std::vector<double> grid(2 * kPanels + 1);
    for (int i = 0; i <= 2 * kPanels; ++i) grid[i] = f(a + 0.5 * h * i);
    double pilot_mag = 0.0;
    for (int p = 0; p < kPanels; ++p)
        pilot_mag += std::fabs(simpson(a + p * h, grid[2 * p], a + (p + 1) * h, grid[2 * p + 2],
                                       grid[2 * p + 1]));
    double eps = std::max(pilot_mag * rel_tol, 1e-300) / kPanels;
    double total = 0.0;
    for (int p = 0; p < kPanels; ++p) {
        double pa = a + p * h, pb = a + (p + 1) * h;
        double whole = simpson(pa, grid[2 * p], pb, grid[2 * p + 2], grid[2 * p + 1]);
        total += adapt(f, pa, grid[2 * p], pb, grid[2 * p + 2], 0.5 * (pa + pb), grid[2 * p + 1],
                       whole, eps, 32);
    }
    return total;
}

namespace {

// Upper bound for Int_X^inf p(x) e^{c x - beta x^2} dx with p(x) = x or 1,
// valid once beta*X > c: the exponent is dominated by e^{(c - beta X) x}.
double exp_tail_bound(double X, double c, double beta, bool with_x) {
    double r = beta * X - c;
    if (r <= 0.0) return INFINITY;
    double head = std::exp(c * X - beta * X * X);
    return with_x ? head * (X / r + 1.0 / (r * r)) : head / r;
}

double cut_point(double c, double beta, double scale, double abs_tol, bool with_x) {
    double X = std::max(1.0, 2.0 * c / beta);
    while (scale * exp_tail_bound(X, c, beta, with_x) > abs_tol) X *= 1.25;
    return X;
}

}  // namespace

double disc_partition_by_quadrature(double beta, double S, double rel_tol) {
    if (!(beta > 0.0)) throw std::domain_error("quadrature: requires beta > 0");
    double w = std::exp(S) / (4.0 * M_PI * M_PI);
    auto f = [&](double x) { return w * std::sinh(2.0 * M_PI * x) * 2.0 * x * std::exp(-beta * x * x); };
    // rough scale of the result for the absolute tail target
    double scale = std::exp(M_PI * M_PI / beta);
    double X = cut_point(2.0 * M_PI, beta, w, 0.01 * rel_tol * scale, true);
    return adaptive_simpson(f, 0.0, X, 0.1 * rel_tol);
}

double super_partition_by_quadrature(double beta, double S, double rel_tol) {
    if (!(beta > 0.0)) throw std::domain_error("quadrature: requires beta > 0");
    double w = 2.0 * std::sqrt(2.0) * std::exp(S) / M_PI;
    auto f = [&](double x) { return w * std::cosh(2.0 * M_PI * x) * std::exp(-beta * x * x); };
    double scale = std::exp(M_PI * M_PI / beta);
    double X = cut_point(2.0 * M_PI, beta, w, 0.01 * rel_tol * scale, false);
    return adaptive_simpson(f, 0.0, X, 0.1 * rel_tol);
}

}  // namespace jtvol
