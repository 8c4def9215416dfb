#include "jtvol/trunc_series.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace jtvol {

TruncSeries::TruncSeries(int lo, int order, Parity parity) : lo_(lo), order_(order), parity_(parity) {
    if (order < lo) throw std::invalid_argument("TruncSeries: order below lowest exponent");
    coeffs_.resize(static_cast<size_t>(order - lo + 1));
}

const ExactScalar& TruncSeries::coeff(int exponent) const {
    static const ExactScalar zero;
    if (exponent < lo_) return zero;
    if (exponent > order_) throw std::out_of_range("TruncSeries: coefficient beyond truncation order");
    return coeffs_[static_cast<size_t>(exponent - lo_)];
}

void TruncSeries::set_coeff(int exponent, const ExactScalar& c) {
    if (exponent < lo_ || exponent > order_)
        throw std::out_of_range("TruncSeries: exponent outside stored window");
    coeffs_[static_cast<size_t>(exponent - lo_)] = c;
}

int TruncSeries::lowest_nonzero() const {
    for (int e = lo_; e <= order_; ++e)
        if (!coeff(e).is_zero()) return e;
    throw std::domain_error("TruncSeries: series is zero over its trusted window");
}

bool TruncSeries::parity_consistent() const {
    if (parity_ == Parity::None) return true;
    int bad = parity_ == Parity::Even ? 1 : 0;
    for (int e = lo_; e <= order_; ++e)
        if (((e % 2 + 2) % 2) == bad && !coeff(e).is_zero()) return false;
    return true;
}

Parity TruncSeries::compose(Parity a, Parity b) {
    if (a == Parity::None || b == Parity::None) return Parity::None;
    return a == b ? Parity::Even : Parity::Odd;
}

TruncSeries& TruncSeries::operator+=(const TruncSeries& o) {
    int lo = std::min(lo_, o.lo_);
    int order = std::min(order_, o.order_);
    Parity p = parity_ == o.parity_ ? parity_ : Parity::None;
    TruncSeries r(lo, order, p);
    for (int e = lo; e <= order; ++e) r.set_coeff(e, coeff(e) + o.coeff(e));
    return *this = r;
}

TruncSeries operator*(const TruncSeries& a, const TruncSeries& b) {
    // Cauchy product; trusted through min(a.order + b.lo, b.order + a.lo).
    int lo = a.lo_ + b.lo_;
    int order = std::min(a.order_ + b.lo_, b.order_ + a.lo_);
    TruncSeries r(lo, order, TruncSeries::compose(a.parity_, b.parity_));
    for (int ea = a.lo_; ea <= a.order_; ++ea) {
        if (a.coeff(ea).is_zero()) continue;
        for (int eb = b.lo_; eb <= b.order_ && ea + eb <= order; ++eb) {
            if (b.coeff(eb).is_zero()) continue;
            r.set_coeff(ea + eb, r.coeff(ea + eb) + a.coeff(ea) * b.coeff(eb));
        }
    }
    return r;
}

TruncSeries TruncSeries::scaled(const ExactScalar& c) const {
    TruncSeries r(lo_, order_, parity_);
    for (int e = lo_; e <= order_; ++e)
        if (!coeff(e).is_zero()) r.set_coeff(e, coeff(e) * c);
    return r;
}

TruncSeries TruncSeries::reciprocal() const {
    int m = lowest_nonzero();
    ExactScalar lead_inv = coeff(m).inverse();  // throws when not a ring unit

    // s = c z^m (1 + u); 1/s = c^-1 z^-m sum (-u)^j.  One order in z is
    // lost per unit of m twice over, so the result is trusted through
    // order - 2m.
    int ro = order_ - 2 * m;
    if (ro < -m) throw std::domain_error("TruncSeries: reciprocal exhausts truncation window");
    TruncSeries r(-m, ro, parity_);
    // Newton-style forward substitution: r_k determined from s * r = 1.
    r.set_coeff(-m, lead_inv);
    for (int e = -m + 1; e <= ro; ++e) {
        // coefficient of z^{e+m} in s*r must vanish (e+m > 0 here)
        ExactScalar acc;
        for (int j = m + 1; j <= order_ && e + m - j >= -m; ++j)
            acc += coeff(j) * r.coeff(e + m - j);
        r.set_coeff(e, -(lead_inv * acc));
    }

    // Verify s * r = 1 + O(z^{order - m + 1}) exactly.
    TruncSeries check = (*this) * r;
    for (int e = check.lo(); e <= check.order(); ++e) {
        const ExactScalar want = e == 0 ? ExactScalar::integer(1) : ExactScalar();
        if (check.coeff(e) != want)
            throw std::logic_error("TruncSeries: reciprocal verification failed");
    }
    return r;
}

bool operator==(const TruncSeries& a, const TruncSeries& b) {
    if (a.lo_ != b.lo_ || a.order_ != b.order_ || a.parity_ != b.parity_) return false;
    return a.coeffs_ == b.coeffs_;
}

std::string TruncSeries::str() const {
    std::ostringstream os;
    bool first = true;
    for (int e = lo_; e <= order_; ++e) {
        if (coeff(e).is_zero()) continue;
        if (!first) os << " + ";
        first = false;
        os << "(" << coeff(e).str() << ")";
        if (e != 0) os << "*z^" << e;
    }
    if (first) os << "0";
    os << " + O(z^" << order_ + 1 << ")";
    return os.str();
}

}  // namespace jtvol
