#pragma once

#include <string>

#include "jtvol/trunc_series.hpp"

namespace jtvol {

enum class EdgeClass { Regular, Hard };

struct DensityParams {
    double entropy_S = 0.0;  // renormalized Einstein-Hilbert coefficient
};

// A spectral curve y(z) on the double cover E = z^2, stored as an exact
// odd (Laurent) series in the uniformizing coordinate z.  The physical
// density of states sits on the branch z = i*sqrt(E):
//
//   rho(E) = (e^S / pi) * |y(i sqrt E)|
//
// density_sign records the sign s with s * Im y(i sqrt E) > 0, i.e. how
// the stored series relates to the Im-positive branch.
class SpectralCurve {
public:
    enum class Kind { Airy, JT, JTSuper };

    // y(z) = slope * z.  Reference curve; slope 1/2 is the leading
    // truncation of the JT curve.
    static SpectralCurve airy(const Rational& slope, int order = 7);

    // y(z) = sin(2 pi z) / (4 pi), truncated at `order` (>= 3).
    static SpectralCurve jt(int order);

    // y(z) = sqrt2 * cos(2 pi z) / z, truncated at `order` (>= 3).
    // Lowest exponent -1; hard edge.
    static SpectralCurve jt_super(int order);

    const std::string& name() const { return name_; }
    Kind kind() const { return kind_; }
    const TruncSeries& y() const { return y_; }
    EdgeClass edge_class() const { return edge_; }
    int density_sign() const { return density_sign_; }
    const Rational& slope() const { return slope_; }

    // Closed-form density of states at E > 0 (the analytic continuation
    // of the stored series; the two are cross-checked in tests).
    double density_of_states(double E, const DensityParams& params) const;

    // Numeric y(i sqrt E)/i from the truncated series itself.  Real by
    // oddness of y; meaningful while the truncation converges at E.
    double y_im_at_isqrtE(double E, int digits = 30) const;

private:
    SpectralCurve(Kind kind, std::string name, TruncSeries y, EdgeClass edge, int density_sign,
                  Rational slope)
        : kind_(kind), name_(std::move(name)), y_(std::move(y)), edge_(edge),
          density_sign_(density_sign), slope_(std::move(slope)) {}

    Kind kind_;
    std::string name_;
    TruncSeries y_;
    EdgeClass edge_;
    int density_sign_;
    Rational slope_;  // Airy only
};

// Series order sufficient for residue extraction at (g, n); see the
// recursion engine for the counting.
int required_series_order(int g, int n);

// Default order for a configured maximum genus (n = 1 worst case is not
// the driver; the full correlator table at Euler characteristic
// 2g-2+n <= 2*gmax is).
int default_series_order(int g_max);

}  // namespace jtvol
