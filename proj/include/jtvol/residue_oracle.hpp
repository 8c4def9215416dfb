#pragma once

#include <map>
#include <vector>

#include "jtvol/spectral_curve.hpp"

namespace jtvol::oracle {

// Reference residue computations for the lowest-order correlators,
// written directly from the kernel with its own series bookkeeping.
// Deliberately independent of the recursion engine and of
// TruncSeries::reciprocal: inversion here is a plain geometric-series
// expansion, the pairing series keeps its odd powers (their cancellation
// is asserted instead of assumed), and the -z leg signs are explicit.
//
// Keys of the returned tables are ORDERED pole multi-indices
// (k_root, k_1, ..), one entry per leg arrangement.

using Table = std::map<std::vector<int>, ExactScalar>;

// 1/(4 y(z)) through z^hi by geometric expansion.
std::map<int, ExactScalar> inverse_4y(const SpectralCurve& curve, int hi);

Table w03(const SpectralCurve& curve);
Table w11(const SpectralCurve& curve);
Table w04(const SpectralCurve& curve);
Table w12(const SpectralCurve& curve);

}  // namespace jtvol::oracle
