#pragma once

#include <map>
#include <string>

#include "jtvol/rational.hpp"

namespace jtvol {

// Element of Q[pi^2, pi^-2] + sqrt(2)*Q[pi^2, pi^-2].
//
// Stored as two sparse maps from the (even) pi exponent to a rational
// coefficient; entries with zero coefficient are never kept, so equality
// is plain structural equality on the canonical form.
class ExactScalar {
public:
    using Part = std::map<int, Rational>;

    ExactScalar() = default;

    static ExactScalar from_rational(const Rational& q) { return term(q, 0, false); }
    static ExactScalar integer(long n) { return from_rational(Rational(n)); }
    // q * pi^pi_exp, or q * sqrt2 * pi^pi_exp
    static ExactScalar term(const Rational& q, int pi_exp, bool sqrt2);

    bool is_zero() const { return one_.empty() && sqrt2_.empty(); }
    const Part& rational_part() const { return one_; }
    const Part& sqrt2_part() const { return sqrt2_; }

    // True when the value is a single monomial q*pi^e or q*sqrt2*pi^e.
    bool is_monomial() const { return one_.size() + sqrt2_.size() == 1; }

    ExactScalar operator-() const;
    ExactScalar& operator+=(const ExactScalar& o);
    ExactScalar& operator-=(const ExactScalar& o);
    friend ExactScalar operator+(ExactScalar a, const ExactScalar& b) { return a += b; }
    friend ExactScalar operator-(ExactScalar a, const ExactScalar& b) { return a -= b; }
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b);

    ExactScalar& operator*=(const ExactScalar& o) { return *this = *this * o; }
    ExactScalar scaled(const Rational& q) const;

    // Ring inverse.  Defined when all terms sit at one pi exponent and the
    // rational pair (a, b) of a + b*sqrt2 has a^2 - 2 b^2 != 0; covers every
    // leading coefficient the series code is required to invert.
    ExactScalar inverse() const;

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        return a.one_ == b.one_ && a.sqrt2_ == b.sqrt2_;
    }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

    // Human rendering, e.g. "1/8" or "-2*sqrt2*pi^2 + 1/3".
    std::string str() const;

private:
    static void add_into(Part& dst, const Part& src, bool negate);
    Part one_;
    Part sqrt2_;
};

}  // namespace jtvol
