#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "jtvol/spectral_curve.hpp"

namespace jtvol {

enum class ExecMode { Serial, OpenMP };

// Raised when a computation needs series coefficients beyond a curve's
// truncation window; carries the order the curve must be rebuilt with.
class CapacityError : public std::runtime_error {
public:
    CapacityError(const std::string& what, int required_order)
        : std::runtime_error(what), required_order_(required_order) {}
    int required_order() const { return required_order_; }

private:
    int required_order_;
};

struct CorrelatorKey {
    int g = 0;
    int n = 0;
    std::string curve;
    bool stable() const { return 2 * g - 2 + n > 0; }
};

// The multi-differential w_{g,n} = sum_K c_K prod dz_i / z_i^{2 k_i + 2},
// stored as a map from the canonically sorted pole multi-index K to its
// ExactScalar coefficient.  The stored coefficient applies to each
// distinct arrangement of K over the legs; full permutation symmetry is
// verified at construction.
class Correlator {
public:
    using Terms = std::map<std::vector<int>, ExactScalar>;

    Correlator() = default;
    Correlator(CorrelatorKey key, Terms terms) : key_(std::move(key)), terms_(std::move(terms)) {}

    const CorrelatorKey& key() const { return key_; }
    const Terms& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }

    // Max of sum(K); -1 for an identically zero correlator.
    int max_total_degree() const;
    Terms top_degree_terms() const;

    const ExactScalar* find(const std::vector<int>& sorted_key) const;

private:
    CorrelatorKey key_;
    Terms terms_;
};

// Exact expansion of 1/(4 y(z)), the z-dependent part of the recursion
// kernel K(z0,z) = dz0 / (4 (z0^2 - z^2) y(z) dz).
class KernelExpansion {
public:
    explicit KernelExpansion(TruncSeries inverse_4y) : inverse_4y_(std::move(inverse_4y)) {}
    const TruncSeries& inverse_4y() const { return inverse_4y_; }

private:
    TruncSeries inverse_4y_;
};

// Memoized correlator engine for one registered spectral curve.
//
// Values are computed in increasing 2g-2+n; the recursion lowers that
// quantity by exactly one, so each level depends only on completed ones.
// In OpenMP mode the independent targets of a level run in parallel and
// are merged in a fixed order; results are bit-identical to a serial run.
class RecursionEngine {
public:
    explicit RecursionEngine(SpectralCurve curve, ExecMode mode = ExecMode::Serial);

    const SpectralCurve& curve() const { return curve_; }
    ExecMode mode() const { return mode_; }
    void set_mode(ExecMode m) { mode_ = m; }

    // Exact expansion of 1/(4y) through z^max_order.
    KernelExpansion kernel_coefficients(int max_order) const;

    // Computes (memoizing dependencies) and returns w_{g,n}.
    const Correlator& correlator(int g, int n);

    // Computes every stable (g, n) with 2g-2+n <= chi_max.
    void compute_all(int chi_max);

    const std::map<std::pair<int, int>, Correlator>& memo() const { return memo_; }

    void clear() { memo_.clear(); }
    void save(const std::string& path) const;
    void load(const std::string& path);

private:
    Correlator compute_one(int g, int n) const;
    void compute_level(int chi, int n_cap, int g_cap);

    SpectralCurve curve_;
    ExecMode mode_;
    std::map<std::pair<int, int>, Correlator> memo_;
};

}  // namespace jtvol
