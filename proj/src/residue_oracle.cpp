#include "jtvol/residue_oracle.hpp"

#include <stdexcept>

namespace jtvol::oracle {

namespace {

using ZSeries = std::map<int, ExactScalar>;

constexpr int kPairMax = 12;  // pairing expansion cut, ample for 2g-2+n <= 2
constexpr int kKernelHi = 6;  // kernel powers beyond z^6 cannot reach these residues
constexpr int kGeomMax = 8;   // geometric-factor cut (root pole index)

void add_term(ZSeries& s, int e, const ExactScalar& c) {
    auto it = s.find(e);
    if (it == s.end()) {
        if (!c.is_zero()) s.emplace(e, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) s.erase(it);
    }
}

ZSeries truncated_product(const ZSeries& a, const ZSeries& b, int hi) {
    ZSeries out;
    for (const auto& [ea, ca] : a)
        for (const auto& [eb, cb] : b) {
            if (ea + eb > hi) continue;
            add_term(out, ea + eb, ca * cb);
        }
    return out;
}

void table_add(Table& t, std::vector<int> key, const ExactScalar& c) {
    auto it = t.find(key);
    if (it == t.end()) {
        if (!c.is_zero()) t.emplace(std::move(key), c);
    } else {
        it->second += c;
        if (it->second.is_zero()) t.erase(it);
    }
}

// Contribution to the residue table from one bracket monomial
// c * z^{zpow} with external pole exponents (p_1..) where leg j carries
// 1/z_j^{p_j + 2}.  Odd p_j never survive; asserted by the caller after
// accumulation, so here they are accumulated as-is with p_j kept raw.
void residue_into(Table& out, const ZSeries& kernel, int zpow, const std::vector<int>& raw_poles,
                  const ExactScalar& c) {
    for (int m = 0; m <= kGeomMax; ++m) {
        int q = -1 - zpow - 2 * m;
        auto it = kernel.find(q);
        if (it == kernel.end()) continue;
        std::vector<int> key;
        key.reserve(raw_poles.size() + 1);
        key.push_back(2 * m);  // raw pole exponent of the root leg minus 2
        key.insert(key.end(), raw_poles.begin(), raw_poles.end());
        table_add(out, std::move(key), c * it->second);
    }
}

// Converts raw pole exponents to pole indices k (exponent = 2k), checking
// that no odd exponent survived the assembly.
Table canonical_indices(const Table& raw) {
    Table out;
    for (const auto& [key, c] : raw) {
        std::vector<int> k(key.size());
        for (size_t i = 0; i < key.size(); ++i) {
            if (key[i] % 2 != 0)
                throw std::logic_error("residue oracle: odd pole survived cancellation");
            k[i] = key[i] / 2;
        }
        out.emplace(std::move(k), c);
    }
    return out;
}

int sign_pow(int m) { return m % 2 == 0 ? 1 : -1; }

}  // namespace

std::map<int, ExactScalar> inverse_4y(const SpectralCurve& curve, int hi) {
    const TruncSeries& y = curve.y();
    ZSeries four_y;
    for (int e = y.lo(); e <= y.order(); ++e)
        if (!y.coeff(e).is_zero()) four_y[e] = y.coeff(e).scaled(Rational(4));
    int m = four_y.begin()->first;
    ExactScalar lead = four_y.begin()->second;
    ExactScalar lead_inv = lead.inverse();

    if (hi + m > y.order() - m)
        throw std::invalid_argument("residue oracle: curve series too short for requested order");

    // 4y = lead z^m (1 + u); expand 1/(1+u) geometrically.
    ZSeries u;
    for (auto it = std::next(four_y.begin()); it != four_y.end(); ++it)
        u[it->first - m] = it->second * lead_inv;
    ZSeries acc{{0, ExactScalar::integer(1)}};
    ZSeries power{{0, ExactScalar::integer(1)}};
    ZSeries minus_u;
    for (const auto& [e, c] : u) minus_u[e] = -c;
    int need = hi + m;
    while (true) {
        power = truncated_product(power, minus_u, need);
        if (power.empty()) break;
        for (const auto& [e, c] : power) add_term(acc, e, c);
    }
    ZSeries out;
    for (const auto& [e, c] : acc)
        if (e - m <= hi) add_term(out, e - m, c * lead_inv);
    return out;
}

Table w11(const SpectralCurve& curve) {
    ZSeries kernel = inverse_4y(curve, kKernelHi);
    Table raw;
    // bracket: w_{0,2}(z,-z) = dz d(-z)/(z-(-z))^2 with the -z orientation
    // carried by the kernel convention; as a coefficient function 1/(4z^2).
    residue_into(raw, kernel, -2, {}, ExactScalar::term(Rational(1, 4), 0, false));
    return canonical_indices(raw);
}

Table w03(const SpectralCurve& curve) {
    ZSeries kernel = inverse_4y(curve, kKernelHi);
    Table raw;
    // F(z, z_1) F(-z, z_2) + F(z, z_2) F(-z, z_1),
    // F(w, z_j) = sum_m (m+1) w^m / z_j^{m+2}
    for (int m1 = 0; m1 <= kPairMax; ++m1)
        for (int m2 = 0; m2 <= kPairMax; ++m2) {
            int both = sign_pow(m2) + sign_pow(m1);  // the two leg assignments
            if (both == 0) continue;
            Rational c((m1 + 1) * (m2 + 1) * both);
            residue_into(raw, kernel, m1 + m2, {m1, m2}, ExactScalar::term(c, 0, false));
        }
    return canonical_indices(raw);
}

Table w04(const SpectralCurve& curve) {
    ZSeries kernel = inverse_4y(curve, kKernelHi);
    Table w3 = w03(curve);
    ExactScalar c000;  // the only possible w03 entry
    if (auto it = w3.find({0, 0, 0}); it != w3.end()) c000 = it->second;
    Table raw;
    for (int j = 0; j < 3; ++j)
        for (int mj = 0; mj <= kPairMax; ++mj) {
            // F(z, z_j) w03(-z, z_a, z_b) and the mirrored assignment
            int both = 1 + sign_pow(mj);
            if (both == 0) continue;
            ExactScalar c = c000.scaled(Rational((mj + 1) * both));
            std::vector<int> poles(3, 0);
            poles[j] = mj;
            residue_into(raw, kernel, mj - 2, poles, c);
        }
    return canonical_indices(raw);
}

Table w12(const SpectralCurve& curve) {
    ZSeries kernel = inverse_4y(curve, kKernelHi);
    Table w3 = w03(curve);
    Table w1 = w11(curve);
    ExactScalar c000;
    if (auto it = w3.find({0, 0, 0}); it != w3.end()) c000 = it->second;
    Table raw;
    // A term: w03(z, -z, z_1) = c000 / (z^4 z_1^2)
    residue_into(raw, kernel, -4, {0}, c000);
    // B terms: F(z, z_1) w11(-z) + w11(z) F(-z, z_1)
    for (const auto& [k, ck] : w1) {
        int pole = 2 * k[0] + 2;
        for (int m1 = 0; m1 <= kPairMax; ++m1) {
            int both = 1 + sign_pow(m1);
            if (both == 0) continue;
            ExactScalar c = ck.scaled(Rational((m1 + 1) * both));
            residue_into(raw, kernel, m1 - pole, {m1}, c);
        }
    }
    return canonical_indices(raw);
}

}  // namespace jtvol::oracle
