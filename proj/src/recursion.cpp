#include "jtvol/recursion.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "jtvol/io.hpp"

namespace jtvol {

int Correlator::max_total_degree() const {
    int best = -1;
    for (const auto& [k, c] : terms_)
        best = std::max(best, std::accumulate(k.begin(), k.end(), 0));
    return best;
}

Correlator::Terms Correlator::top_degree_terms() const {
    int top = max_total_degree();
    Terms out;
    for (const auto& [k, c] : terms_)
        if (std::accumulate(k.begin(), k.end(), 0) == top) out.emplace(k, c);
    return out;
}

const ExactScalar* Correlator::find(const std::vector<int>& sorted_key) const {
    auto it = terms_.find(sorted_key);
    return it == terms_.end() ? nullptr : &it->second;
}

RecursionEngine::RecursionEngine(SpectralCurve curve, ExecMode mode)
    : curve_(std::move(curve)), mode_(mode) {}

KernelExpansion RecursionEngine::kernel_coefficients(int max_order) const {
    const TruncSeries& y = curve_.y();
    int m = y.lowest_nonzero();
    int available = y.order() - 2 * m;
    if (max_order > available)
        throw CapacityError("kernel expansion needs curve series through order " +
                                std::to_string(max_order + 2 * m) + " (have " +
                                std::to_string(y.order()) + ")",
                            max_order + 2 * m);
    TruncSeries inv = y.scaled(ExactScalar::integer(4)).reciprocal();
    return KernelExpansion(std::move(inv));
}

namespace {

using ExtKey = std::vector<int>;             // pole index per external slot
using Table = std::map<ExtKey, ExactScalar>;
using ZTable = std::map<int, Table>;         // z power -> coefficient table

void ztable_add(ZTable& dst, int zpow, const ExtKey& key, const ExactScalar& c) {
    auto& cell = dst[zpow][key];
    cell += c;
    if (cell.is_zero()) {
        dst[zpow].erase(key);
        if (dst[zpow].empty()) dst.erase(zpow);
    }
}

int min_zpow(const ZTable& t, int fallback) { return t.empty() ? fallback : t.begin()->first; }

// Legs of one recursion factor: the z leg plus the external slots listed
// in `slots`.  Stable factors expand their memoized terms over those
// slots; the (0,2) factor is the pairing series with w_{0,2}(z, z_j)
// restricted to even powers of z -- odd powers can never reach the
// residue because 1/(4y) is odd and every other z dependence is even.
ZTable factor_expansion(const std::map<std::pair<int, int>, Correlator>& memo,
                        const SpectralCurve& curve, int g_i, const std::vector<int>& slots,
                        int ext, int pair_zpow_max) {
    ZTable out;
    int n_i = static_cast<int>(slots.size()) + 1;
    if (g_i == 0 && n_i == 2) {
        // even part of sum_m (m+1) z^m / z_j^{m+2}
        for (int t = 0; 2 * t <= pair_zpow_max; ++t) {
            ExtKey key(ext, 0);
            key[slots[0]] = t;
            ztable_add(out, 2 * t, key, ExactScalar::integer(2 * t + 1));
        }
        return out;
    }
    auto it = memo.find({g_i, n_i});
    if (it == memo.end())
        throw std::logic_error("recursion: dependency (" + std::to_string(g_i) + "," +
                               std::to_string(n_i) + ") missing from memo of " + curve.name());
    for (const auto& [k, c] : it->second.terms()) {
        std::vector<int> perm = k;
        std::sort(perm.begin(), perm.end());
        do {
            ExtKey key(ext, 0);
            for (size_t j = 0; j < slots.size(); ++j) key[slots[j]] = perm[j + 1];
            ztable_add(out, -(2 * perm[0] + 2), key, c);
        } while (std::next_permutation(perm.begin(), perm.end()));
    }
    return out;
}

int distinct_permutation_count(const std::vector<int>& sorted_key) {
    // multinomial n! / prod(multiplicities!)
    long count = 1, total = 0, run = 1;
    for (size_t i = 0; i < sorted_key.size(); ++i) {
        ++total;
        count = count * total / run;
        run = (i + 1 < sorted_key.size() && sorted_key[i + 1] == sorted_key[i]) ? run + 1 : 1;
    }
    return static_cast<int>(count);
}

}  // namespace

Correlator RecursionEngine::compute_one(int g, int n) const {
    CorrelatorKey key{g, n, curve_.name()};
    if (!key.stable()) throw std::invalid_argument("correlator: unstable (g,n) rejected");

    const int ext = n - 1;
    const int y_lo = curve_.y().lowest_nonzero();
    const int u_max = -1 + y_lo;  // z powers of the bracket that can reach the residue

    // Bracket U(z): A term w_{g-1,n+1}(z,-z,ext) plus the stable splits
    // w_{g1}(z, I1) w_{g2}(-z, I2).  All dz factors and the sign of the
    // -z leg drop out of the surviving (even) part.
    ZTable u;

    if (g >= 1) {
        if (g == 1 && n == 1) {
            // w_{0,2}(z,-z) = 1/(4 z^2)
            ztable_add(u, -2, ExtKey{}, ExactScalar::term(Rational(1, 4), 0, false));
        } else {
            auto it = memo_.find({g - 1, n + 1});
            if (it == memo_.end()) throw std::logic_error("recursion: missing A-term dependency");
            for (const auto& [k, c] : it->second.terms()) {
                std::vector<int> perm = k;  // already sorted
                do {
                    ExtKey ek(perm.begin() + 2, perm.end());
                    ztable_add(u, -(2 * perm[0] + 2 * perm[1] + 4), ek, c);
                } while (std::next_permutation(perm.begin(), perm.end()));
            }
        }
    }

    std::vector<int> all_slots(ext);
    std::iota(all_slots.begin(), all_slots.end(), 0);
    for (int g1 = 0; g1 <= g; ++g1) {
        int g2 = g - g1;
        for (unsigned mask = 0; mask < (1u << ext); ++mask) {
            std::vector<int> s1, s2;
            for (int j = 0; j < ext; ++j) ((mask >> j) & 1u ? s1 : s2).push_back(j);
            if (g1 == 0 && s1.empty()) continue;  // w_{0,1} never enters
            if (g2 == 0 && s2.empty()) continue;

            // Build the non-pairing side first so pairing expansions can
            // be cut at the highest power that still reaches u_max.
            bool pair1 = (g1 == 0 && s1.size() == 1);
            bool pair2 = (g2 == 0 && s2.size() == 1);
            ZTable f1, f2;
            if (!pair2) f2 = factor_expansion(memo_, curve_, g2, s2, ext, 0);
            if (!pair1) f1 = factor_expansion(memo_, curve_, g1, s1, ext, 0);
            if (pair1) f1 = factor_expansion(memo_, curve_, g1, s1, ext, u_max - min_zpow(f2, 0));
            if (pair2) f2 = factor_expansion(memo_, curve_, g2, s2, ext, u_max - min_zpow(f1, 0));

            for (const auto& [p1, t1] : f1)
                for (const auto& [p2, t2] : f2) {
                    if (p1 + p2 > u_max) continue;
                    for (const auto& [k1, c1] : t1)
                        for (const auto& [k2, c2] : t2) {
                            ExtKey merged(ext);
                            for (int j = 0; j < ext; ++j) merged[j] = k1[j] + k2[j];
                            ztable_add(u, p1 + p2, merged, c1 * c2);
                        }
                }
        }
    }

    if (u.empty()) return Correlator(key, {});

    // Residue at z=0 of U(z) / (4 y(z) (z0^2 - z^2)): expanding the
    // geometric factor as sum_m z^{2m}/z0^{2m+2}, the z^{-1} coefficient
    // pairs U's z^p with the kernel's z^q where p + q + 2m = -1.
    int kernel_hi = -1 - u.begin()->first;
    KernelExpansion ker = kernel_coefficients(kernel_hi);
    const TruncSeries& kz = ker.inverse_4y();

    std::map<std::pair<int, ExtKey>, ExactScalar> rooted;
    for (const auto& [p, table] : u)
        for (int q = kz.lo(); q <= std::min(kz.order(), -1 - p); ++q) {
            if (kz.coeff(q).is_zero()) continue;
            int rem = -1 - p - q;
            if (rem < 0 || rem % 2 != 0) continue;
            int m = rem / 2;
            for (const auto& [ek, c] : table) {
                auto& cell = rooted[{m, ek}];
                cell += c * kz.coeff(q);
            }
        }

    // Canonicalize to sorted multi-indices, verifying full permutation
    // symmetry (symmetry in the external slots is manifest; symmetry
    // between the root leg and the rest is the recursion's theorem and
    // is enforced here rather than assumed).
    std::map<std::vector<int>, std::pair<ExactScalar, int>> grouped;
    for (const auto& [rk, c] : rooted) {
        if (c.is_zero()) continue;
        std::vector<int> full;
        full.reserve(n);
        full.push_back(rk.first);
        full.insert(full.end(), rk.second.begin(), rk.second.end());
        std::sort(full.begin(), full.end());
        auto it = grouped.find(full);
        if (it == grouped.end()) {
            grouped.emplace(full, std::make_pair(c, 1));
        } else {
            if (it->second.first != c)
                throw std::logic_error("correlator symmetry violation at (" + std::to_string(g) +
                                       "," + std::to_string(n) + ")");
            ++it->second.second;
        }
    }

    Correlator::Terms terms;
    for (const auto& [k, entry] : grouped) {
        if (entry.second != distinct_permutation_count(k))
            throw std::logic_error("correlator symmetry violation at (" + std::to_string(g) + "," +
                                   std::to_string(n) + ")");
        terms.emplace(k, entry.first);
    }

    if (curve_.edge_class() == EdgeClass::Regular) {
        Correlator probe(key, terms);
        if (probe.max_total_degree() > 3 * g - 3 + n)
            throw std::logic_error("correlator degree bound violated");
        return probe;
    }
    return Correlator(key, std::move(terms));
}

void RecursionEngine::compute_level(int chi, int n_cap, int g_cap) {
    std::vector<std::pair<int, int>> targets;
    for (int g = 0; g <= g_cap && 2 * g <= chi + 1; ++g) {
        int n = chi + 2 - 2 * g;
        if (n >= 1 && n <= n_cap && !memo_.count({g, n})) targets.emplace_back(g, n);
    }
    if (targets.empty()) return;
    std::vector<Correlator> results(targets.size());
    if (mode_ == ExecMode::OpenMP) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (size_t i = 0; i < targets.size(); ++i)
            results[i] = compute_one(targets[i].first, targets[i].second);
    } else {
        for (size_t i = 0; i < targets.size(); ++i)
            results[i] = compute_one(targets[i].first, targets[i].second);
    }
    for (size_t i = 0; i < targets.size(); ++i) memo_.emplace(targets[i], std::move(results[i]));
}

const Correlator& RecursionEngine::correlator(int g, int n) {
    CorrelatorKey key{g, n, curve_.name()};
    if (!key.stable()) throw std::invalid_argument("correlator: unstable (g,n) rejected");
    auto it = memo_.find({g, n});
    if (it != memo_.end()) return it->second;
    // Dependency cone of (g, n): genus never exceeds g and the leg count
    // grows by at most one per unit of 2g-2+n descended.
    int chi = 2 * g - 2 + n;
    for (int level = 1; level <= chi; ++level) compute_level(level, n + (chi - level), g);
    return memo_.at({g, n});
}

void RecursionEngine::compute_all(int chi_max) {
    for (int level = 1; level <= chi_max; ++level)
        compute_level(level, level + 2, (level + 1) / 2);
}

void RecursionEngine::save(const std::string& path) const {
    Json j;
    j["version"] = 1;
    j["curve"] = curve_.name();
    Json entries = Json::array();
    std::vector<std::pair<int, int>> keys;
    for (const auto& [k, v] : memo_) keys.push_back(k);
    std::sort(keys.begin(), keys.end(), [](auto a, auto b) {
        int ca = 2 * a.first - 2 + a.second, cb = 2 * b.first - 2 + b.second;
        return std::tie(ca, a.first) < std::tie(cb, b.first);
    });
    for (const auto& k : keys) {
        const Correlator& w = memo_.at(k);
        Json e;
        e["g"] = k.first;
        e["n"] = k.second;
        Json terms = Json::array();
        for (const auto& [idx, c] : w.terms()) terms.push_back(Json::array({idx, scalar_to_json(c)}));
        e["terms"] = std::move(terms);
        entries.push_back(std::move(e));
    }
    j["entries"] = std::move(entries);
    std::ofstream os(path);
    if (!os) throw std::runtime_error("memo save: cannot open " + path);
    os << j.dump(2) << "\n";
}

void RecursionEngine::load(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("memo load: cannot open " + path);
    Json j;
    try {
        is >> j;
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("memo load: corrupt file: ") + e.what());
    }
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw std::runtime_error("memo load: unsupported version");
    if (!j.contains("curve") || j["curve"].get<std::string>() != curve_.name())
        throw std::runtime_error("memo load: file is for curve '" +
                                 j.value("curve", std::string("?")) + "', engine has '" +
                                 curve_.name() + "'");
    std::map<std::pair<int, int>, Correlator> fresh;
    for (const auto& e : j.at("entries")) {
        int g = e.at("g").get<int>();
        int n = e.at("n").get<int>();
        Correlator::Terms terms;
        for (const auto& t : e.at("terms"))
            terms.emplace(t.at(0).get<std::vector<int>>(), scalar_from_json(t.at(1)));
        fresh.emplace(std::make_pair(g, n), Correlator(CorrelatorKey{g, n, curve_.name()}, terms));
    }
    memo_ = std::move(fresh);
}

}  // namespace jtvol
