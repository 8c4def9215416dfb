#include "jtvol/exact_scalar.hpp"

#include <sstream>
#include <stdexcept>

namespace jtvol {

ExactScalar ExactScalar::term(const Rational& q, int pi_exp, bool sqrt2) {
    if (pi_exp % 2 != 0) throw std::invalid_argument("ExactScalar: pi exponent must be even");
    ExactScalar s;
    if (!q.is_zero()) (sqrt2 ? s.sqrt2_ : s.one_)[pi_exp] = q;
    return s;
}

void ExactScalar::add_into(Part& dst, const Part& src, bool negate) {
    for (const auto& [e, q] : src) {
        auto it = dst.find(e);
        if (it == dst.end()) {
            dst.emplace(e, negate ? -q : q);
        } else {
            if (negate) it->second -= q; else it->second += q;
            if (it->second.is_zero()) dst.erase(it);
        }
    }
}

ExactScalar ExactScalar::operator-() const {
    ExactScalar r;
    for (const auto& [e, q] : one_) r.one_.emplace(e, -q);
    for (const auto& [e, q] : sqrt2_) r.sqrt2_.emplace(e, -q);
    return r;
}

ExactScalar& ExactScalar::operator+=(const ExactScalar& o) {
    add_into(one_, o.one_, false);
    add_into(sqrt2_, o.sqrt2_, false);
    return *this;
}

ExactScalar& ExactScalar::operator-=(const ExactScalar& o) {
    add_into(one_, o.one_, true);
    add_into(sqrt2_, o.sqrt2_, true);
    return *this;
}

namespace {

void convolve(ExactScalar::Part& dst, const ExactScalar::Part& a, const ExactScalar::Part& b,
              const Rational& scale) {
    for (const auto& [ea, qa] : a)
        for (const auto& [eb, qb] : b) {
            Rational q = qa * qb * scale;
            auto it = dst.find(ea + eb);
            if (it == dst.end()) {
                if (!q.is_zero()) dst.emplace(ea + eb, q);
            } else {
                it->second += q;
                if (it->second.is_zero()) dst.erase(it);
            }
        }
}

}  // namespace

ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
    // (a1 + a2*sqrt2)(b1 + b2*sqrt2) = (a1 b1 + 2 a2 b2) + (a1 b2 + a2 b1)*sqrt2
    ExactScalar r;
    convolve(r.one_, a.one_, b.one_, Rational(1));
    convolve(r.one_, a.sqrt2_, b.sqrt2_, Rational(2));
    convolve(r.sqrt2_, a.one_, b.sqrt2_, Rational(1));
    convolve(r.sqrt2_, a.sqrt2_, b.one_, Rational(1));
    return r;
}

ExactScalar ExactScalar::scaled(const Rational& q) const {
    if (q.is_zero()) return {};
    ExactScalar r;
    for (const auto& [e, c] : one_) r.one_.emplace(e, c * q);
    for (const auto& [e, c] : sqrt2_) r.sqrt2_.emplace(e, c * q);
    return r;
}

ExactScalar ExactScalar::inverse() const {
    if (is_zero()) throw std::domain_error("ExactScalar: inverse of zero");
    int pi_exp = !one_.empty() ? one_.begin()->first : sqrt2_.begin()->first;
    if (one_.size() > 1 || sqrt2_.size() > 1 ||
        (!one_.empty() && !sqrt2_.empty() && one_.begin()->first != sqrt2_.begin()->first))
        throw std::domain_error("ExactScalar: not invertible in the ring: " + str());
    Rational a = one_.empty() ? Rational(0) : one_.begin()->second;
    Rational b = sqrt2_.empty() ? Rational(0) : sqrt2_.begin()->second;
    // (a + b*sqrt2)^-1 = (a - b*sqrt2) / (a^2 - 2 b^2)
    Rational disc = a * a - Rational(2) * b * b;
    if (disc.is_zero()) throw std::domain_error("ExactScalar: not invertible in the ring: " + str());
    ExactScalar r = term(a / disc, -pi_exp, false);
    r += term(-(b / disc), -pi_exp, true);
    return r;
}

std::string ExactScalar::str() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    auto emit = [&](const Part& part, bool sqrt2) {
        for (const auto& [e, q] : part) {
            Rational qq = q;
            if (!first) {
                os << (qq.sign() < 0 ? " - " : " + ");
                if (qq.sign() < 0) qq = -qq;
            }
            first = false;
            bool unit = (qq == Rational(1)) && (sqrt2 || e != 0);
            if (!unit) os << qq.str();
            if (sqrt2) os << (unit ? "" : "*") << "sqrt2";
            if (e != 0) os << ((unit && !sqrt2) ? "" : "*") << "pi^" << e;
        }
    };
    emit(one_, false);
    emit(sqrt2_, true);
    return os.str();
}

}  // namespace jtvol
