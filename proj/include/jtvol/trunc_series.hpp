#pragma once

#include <vector>

#include "jtvol/exact_scalar.hpp"

namespace jtvol {

enum class Parity { Even, Odd, None };

// Truncated Laurent series in z with ExactScalar coefficients.
//
// Coefficients are stored densely for exponents lo .. order (inclusive);
// everything below lo is exactly zero, everything above order is unknown.
// Arithmetic propagates the trust window so a result never claims
// accuracy past what its operands support.
class TruncSeries {
public:
    TruncSeries(int lo, int order, Parity parity = Parity::None);

    int lo() const { return lo_; }
    int order() const { return order_; }
    Parity parity() const { return parity_; }

    const ExactScalar& coeff(int exponent) const;
    void set_coeff(int exponent, const ExactScalar& c);

    // Smallest exponent with a nonzero stored coefficient; throws if the
    // series is identically zero over its window.
    int lowest_nonzero() const;

    // Verifies that the declared parity matches the stored coefficients.
    bool parity_consistent() const;

    TruncSeries& operator+=(const TruncSeries& o);
    friend TruncSeries operator+(TruncSeries a, const TruncSeries& b) { return a += b; }
    friend TruncSeries operator*(const TruncSeries& a, const TruncSeries& b);
    TruncSeries scaled(const ExactScalar& c) const;

    // Multiplicative inverse: requires an invertible leading coefficient.
    // Result satisfies (*this) * result == 1 + O(z^{order+1-2*lo}); the
    // identity is verified internally before returning.
    TruncSeries reciprocal() const;

    friend bool operator==(const TruncSeries& a, const TruncSeries& b);

    std::string str() const;

private:
    static Parity compose(Parity a, Parity b);
    int lo_;
    int order_;
    Parity parity_;
    std::vector<ExactScalar> coeffs_;  // index i <-> exponent lo_ + i
};

}  // namespace jtvol
