#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "jtvol/numeric.hpp"
#include "jtvol/recursion.hpp"
#include "jtvol/residue_oracle.hpp"
#include "jtvol/volumes.hpp"

using namespace jtvol;

namespace {

ExactScalar rat(long n, long d = 1) { return ExactScalar::term(Rational(n, d), 0, false); }
ExactScalar pip(long n, long d, int e) { return ExactScalar::term(Rational(n, d), e, false); }
ExactScalar sq2(long n, long d, int e = 0) { return ExactScalar::term(Rational(n, d), e, true); }

Correlator::Terms fold(const oracle::Table& t) {
    Correlator::Terms out;
    for (const auto& [key, c] : t) {
        std::vector<int> s = key;
        std::sort(s.begin(), s.end());
        auto it = out.find(s);
        if (it == out.end()) out.emplace(s, c);
        else REQUIRE(it->second == c);
    }
    return out;
}

}  // namespace

TEST_CASE("kernel expansion: Airy, JT, super") {
    RecursionEngine airy(SpectralCurve::airy(Rational(1, 2), 9));
    TruncSeries ka = airy.kernel_coefficients(5).inverse_4y();
    CHECK(ka.coeff(-1) == rat(1, 2));
    for (int e = 0; e <= 5; ++e) CHECK(ka.coeff(e) == ExactScalar());

    RecursionEngine jt(SpectralCurve::jt(9));
    TruncSeries kj = jt.kernel_coefficients(5).inverse_4y();
    CHECK(kj.coeff(-1) == rat(1, 2));
    CHECK(kj.coeff(1) == pip(1, 3, 2));
    CHECK(kj.coeff(3) == pip(7, 45, 4));

    RecursionEngine super(SpectralCurve::jt_super(9));
    TruncSeries ks = super.kernel_coefficients(5).inverse_4y();
    CHECK(ks.lo() == 1);
    CHECK(ks.coeff(1) == sq2(1, 8));
    CHECK(ks.coeff(3) == sq2(1, 4, 2));

    // multiply-back: 1/(4y) * 4y = 1
    TruncSeries check = kj * jt.curve().y().scaled(rat(4));
    CHECK(check.coeff(0) == rat(1));
    for (int e = 1; e <= check.order(); ++e) CHECK(check.coeff(e) == ExactScalar());
}

TEST_CASE("kernel truncation overflow names the required order") {
    RecursionEngine eng(SpectralCurve::jt(5));
    CHECK_THROWS_AS(eng.kernel_coefficients(7), CapacityError);
    try {
        eng.kernel_coefficients(7);
    } catch (const CapacityError& e) {
        CHECK(e.required_order() == 9);
    }
}

TEST_CASE("JT base correlators") {
    RecursionEngine eng(SpectralCurve::jt(15));

    const Correlator& w03 = eng.correlator(0, 3);
    REQUIRE(w03.terms().size() == 1);
    CHECK(w03.terms().at({0, 0, 0}) == rat(1));

    const Correlator& w11 = eng.correlator(1, 1);
    REQUIRE(w11.terms().size() == 2);
    CHECK(w11.terms().at({1}) == rat(1, 8));
    CHECK(w11.terms().at({0}) == pip(1, 12, 2));

    const Correlator& w04 = eng.correlator(0, 4);
    REQUIRE(w04.terms().size() == 2);
    CHECK(w04.terms().at({0, 0, 0, 1}) == rat(3));
    CHECK(w04.terms().at({0, 0, 0, 0}) == pip(2, 1, 2));

    CHECK_THROWS(eng.correlator(0, 2));
    CHECK_THROWS(eng.correlator(0, 1));
}

TEST_CASE("Airy correlators and the intersection-number dictionary") {
    // slope 1/2 matches the JT leading behavior; the (2k+1)!! dictionary
    // holds there, anchored at <tau_0^3> = 1 and <tau_1> = 1/24.
    RecursionEngine half(SpectralCurve::airy(Rational(1, 2), 17));
    CHECK(half.correlator(0, 3).terms().at({0, 0, 0}) == rat(1));
    CHECK(half.correlator(1, 1).terms().at({1}) == rat(1, 8));
    CHECK(half.correlator(1, 1).terms().size() == 1);

    // (1,2): <tau_0 tau_2> = <tau_1 tau_1> = 1/24
    const Correlator& w12 = half.correlator(1, 2);
    CHECK(w12.terms().at({0, 2}) == rat(15, 24));
    CHECK(w12.terms().at({1, 1}) == rat(9, 24));
    CHECK(w12.terms().size() == 2);

    // (0,5): <tau_2 tau_0^4> = 1, <tau_1^2 tau_0^3> = 2
    const Correlator& w05 = half.correlator(0, 5);
    CHECK(w05.terms().at({0, 0, 0, 0, 2}) == rat(15));
    CHECK(w05.terms().at({0, 0, 0, 1, 1}) == rat(18));
    CHECK(w05.terms().size() == 2);

    // (2,1): <tau_4> = 1/1152
    const Correlator& w21 = half.correlator(2, 1);
    CHECK(w21.terms().at({4}) == rat(945, 1152));
    CHECK(w21.terms().size() == 1);

    // slope 1 halves the (1,1) value: 1/(16 c) with c = 1
    RecursionEngine one(SpectralCurve::airy(Rational(1), 9));
    CHECK(one.correlator(1, 1).terms().at({1}) == rat(1, 16));

    // Airy correlators are purely top-degree
    for (auto [g, n] : {std::pair{1, 2}, {0, 5}, {2, 1}}) {
        const Correlator& w = half.correlator(g, n);
        for (const auto& [k, c] : w.terms()) {
            int total = 0;
            for (int ki : k) total += ki;
            CHECK(total == 3 * g - 3 + n);
        }
    }
}

TEST_CASE("string and dilaton equations across the whole Airy table") {
    // On the Airy(1/2) curve the coefficients are intersection numbers
    // dressed by (2k+1)!!: I(K) = c_K / prod (2k_i+1)!!.  Two classical
    // identities then constrain every entry:
    //   string:  I_g(0, K) = sum_j I_g(..., k_j - 1, ...)
    //   dilaton: I_g(1, K) = (2g-2+n) I_g(K)
    // (both for stable reduced (g, n)); they probe the full recursion
    // pipeline independently of any frozen value.
    RecursionEngine eng(SpectralCurve::airy(Rational(1, 2), 17));
    eng.compute_all(6);

    auto intersection = [](const Correlator& w, const std::vector<int>& sorted_key) {
        const ExactScalar* c = w.find(sorted_key);
        if (c == nullptr) return ExactScalar();
        Rational undress(1);
        for (int k : sorted_key) undress /= odd_double_factorial(k);
        return c->scaled(undress);
    };

    int string_checked = 0, dilaton_checked = 0;
    for (const auto& [gn, w] : eng.memo()) {
        auto [g, n] = gn;
        if (n < 2 || 2 * g - 2 + (n - 1) <= 0) continue;  // reduced side must be stable
        const Correlator& reduced = eng.correlator(g, n - 1);
        for (const auto& [key, coeff] : w.terms()) {
            // string: distinguished tau_0 leg
            if (key.front() == 0) {
                std::vector<int> rest(key.begin() + 1, key.end());
                ExactScalar rhs;
                for (size_t j = 0; j < rest.size(); ++j) {
                    if (rest[j] == 0) continue;
                    std::vector<int> lowered = rest;
                    lowered[j] -= 1;
                    std::sort(lowered.begin(), lowered.end());
                    rhs += intersection(reduced, lowered);
                }
                CHECK(intersection(w, key) == rhs);
                ++string_checked;
            }
            // dilaton: distinguished tau_1 leg
            if (std::count(key.begin(), key.end(), 1) > 0) {
                std::vector<int> rest = key;
                rest.erase(std::find(rest.begin(), rest.end(), 1));
                ExactScalar rhs =
                    intersection(reduced, rest).scaled(Rational(2 * g - 2 + (n - 1)));
                CHECK(intersection(w, key) == rhs);
                ++dilaton_checked;
            }
        }
    }
    CHECK(string_checked > 20);
    CHECK(dilaton_checked > 10);
}

TEST_CASE("engine agrees with the independent residue oracle") {
    for (auto make : {+[] { return SpectralCurve::jt(15); },
                      +[] { return SpectralCurve::airy(Rational(1), 15); },
                      +[] { return SpectralCurve::jt_super(15); }}) {
        SpectralCurve curve = make();
        RecursionEngine eng(curve);
        CHECK(eng.correlator(0, 3).terms() == fold(oracle::w03(curve)));
        CHECK(eng.correlator(1, 1).terms() == fold(oracle::w11(curve)));
        CHECK(eng.correlator(0, 4).terms() == fold(oracle::w04(curve)));
        CHECK(eng.correlator(1, 2).terms() == fold(oracle::w12(curve)));
    }
}

TEST_CASE("super correlators: hard edge collapses the pole degrees") {
    RecursionEngine eng(SpectralCurve::jt_super(15));
    CHECK(eng.correlator(0, 3).terms().empty());
    CHECK(eng.correlator(0, 4).terms().empty());

    const Correlator& w11 = eng.correlator(1, 1);
    REQUIRE(w11.terms().size() == 1);
    CHECK(w11.terms().at({0}) == sq2(1, 32));

    const Correlator& w12 = eng.correlator(1, 2);
    REQUIRE(w12.terms().size() == 1);
    CHECK(w12.terms().at({0, 0}) == rat(1, 64));
}

TEST_CASE("degree bound is saturated for JT") {
    RecursionEngine eng(SpectralCurve::jt(17));
    for (auto [g, n] : {std::pair{0, 4}, {1, 1}, {1, 2}, {2, 1}, {0, 5}, {1, 3}}) {
        CHECK(eng.correlator(g, n).max_total_degree() == 3 * g - 3 + n);
    }
}

TEST_CASE("volume dictionary and known volume polynomials") {
    RecursionEngine eng(SpectralCurve::jt(15));

    VolumePolynomial v03 = VolumePolynomial::from_correlator(eng.correlator(0, 3));
    CHECK(v03.terms().at({0, 0, 0}) == rat(1));

    VolumePolynomial v11 = VolumePolynomial::from_correlator(eng.correlator(1, 1));
    CHECK(v11.terms().at({1}) == rat(1, 48));
    CHECK(v11.terms().at({0}) == pip(1, 12, 2));

    VolumePolynomial v04 = VolumePolynomial::from_correlator(eng.correlator(0, 4));
    CHECK(v04.terms().at({0, 0, 0, 1}) == rat(1, 2));
    CHECK(v04.terms().at({0, 0, 0, 0}) == pip(2, 1, 2));

    // V_{1,2} = (4 pi^2 + b1^2 + b2^2)(12 pi^2 + b1^2 + b2^2)/192
    VolumePolynomial v12 = VolumePolynomial::from_correlator(eng.correlator(1, 2));
    CHECK(v12.terms().at({0, 0}) == pip(1, 4, 4));
    CHECK(v12.terms().at({0, 1}) == pip(1, 12, 2));
    CHECK(v12.terms().at({0, 2}) == rat(1, 192));
    CHECK(v12.terms().at({1, 1}) == rat(1, 96));
    CHECK(v12.terms().size() == 4);
}

TEST_CASE("V_{2,1} equals the classical product form") {
    // (4 pi^2 + B)(12 pi^2 + B)(6960 pi^4 + 384 pi^2 B + 5 B^2)/2211840, B = b^2
    std::vector<ExactScalar> f1{pip(4, 1, 2), rat(1)};
    std::vector<ExactScalar> f2{pip(12, 1, 2), rat(1)};
    std::vector<ExactScalar> f3{pip(6960, 1, 4), pip(384, 1, 2), rat(5)};
    auto mul = [](const std::vector<ExactScalar>& a, const std::vector<ExactScalar>& b) {
        std::vector<ExactScalar> out(a.size() + b.size() - 1);
        for (size_t i = 0; i < a.size(); ++i)
            for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
        return out;
    };
    std::vector<ExactScalar> prod = mul(mul(f1, f2), f3);
    for (auto& c : prod) c = c.scaled(Rational(1, 2211840));

    RecursionEngine eng(SpectralCurve::jt(15));
    VolumePolynomial v21 = VolumePolynomial::from_correlator(eng.correlator(2, 1));
    REQUIRE(v21.terms().size() == prod.size());
    for (int d = 0; d < static_cast<int>(prod.size()); ++d) CHECK(*v21.find({d}) == prod[d]);
}

TEST_CASE("volume evaluation") {
    RecursionEngine eng(SpectralCurve::jt(15));
    VolumePolynomial v03 = VolumePolynomial::from_correlator(eng.correlator(0, 3));
    CHECK(v03.evaluate({1.0, 2.5, 0.0}) == doctest::Approx(1.0).epsilon(1e-14));

    VolumePolynomial v11 = VolumePolynomial::from_correlator(eng.correlator(1, 1));
    CHECK(v11.evaluate({0.0}) == doctest::Approx(M_PI * M_PI / 12).epsilon(1e-13));
    CHECK(v11.evaluate({2 * M_PI}) == doctest::Approx(M_PI * M_PI / 6).epsilon(1e-13));
    CHECK_THROWS(v11.evaluate({1.0, 2.0}));
    CHECK_THROWS(v11.evaluate({-1.0}));

    // positivity at randomly chosen real boundary lengths
    VolumePolynomial v13 = VolumePolynomial::from_correlator(eng.correlator(1, 3));
    CHECK(v13.evaluate({0.3, 1.7, 2.2}) > 0.0);
    CHECK(v13.evaluate({0.0, 0.0, 0.0}) > 0.0);
}

TEST_CASE("volume linearity under correlator scaling") {
    RecursionEngine eng(SpectralCurve::jt(15));
    const Correlator& w = eng.correlator(1, 2);
    Correlator::Terms doubled;
    for (const auto& [k, c] : w.terms()) doubled.emplace(k, c.scaled(Rational(2)));
    Correlator w2(w.key(), doubled);
    VolumePolynomial v = VolumePolynomial::from_correlator(w);
    VolumePolynomial v2 = VolumePolynomial::from_correlator(w2);
    for (const auto& [d, c] : v.terms()) CHECK(v2.terms().at(d) == c.scaled(Rational(2)));
}

TEST_CASE("convention flag rescales only (1,1)") {
    RecursionEngine eng(SpectralCurve::jt(15));
    VolumePolynomial v11 = VolumePolynomial::from_correlator(eng.correlator(1, 1));
    Json jt_form = v11.to_json("jt");
    Json mz_form = v11.to_json("mirzakhani");
    CHECK(scalar_from_json(mz_form["terms"][0]["coeff"]) ==
          scalar_from_json(jt_form["terms"][0]["coeff"]).scaled(Rational(2)));

    VolumePolynomial v12 = VolumePolynomial::from_correlator(eng.correlator(1, 2));
    CHECK(v12.to_json("jt")["terms"] == v12.to_json("mirzakhani")["terms"]);
    CHECK_THROWS(v11.to_json("weil"));
}

TEST_CASE("determinism: recomputation and memo clear") {
    RecursionEngine a(SpectralCurve::jt(15));
    RecursionEngine b(SpectralCurve::jt(15));
    a.compute_all(4);
    b.compute_all(4);
    REQUIRE(a.memo().size() == b.memo().size());
    for (const auto& [k, w] : a.memo()) CHECK(w.terms() == b.memo().at(k).terms());

    auto snapshot = a.correlator(1, 2).terms();
    a.clear();
    CHECK(a.memo().empty());
    CHECK(a.correlator(1, 2).terms() == snapshot);
}

TEST_CASE("parallel evaluation is bit-identical to serial") {
    RecursionEngine serial(SpectralCurve::jt(17), ExecMode::Serial);
    RecursionEngine parallel(SpectralCurve::jt(17), ExecMode::OpenMP);
    serial.compute_all(6);
    parallel.compute_all(6);
    REQUIRE(serial.memo().size() == parallel.memo().size());
    for (const auto& [k, w] : serial.memo()) CHECK(w.terms() == parallel.memo().at(k).terms());
}

TEST_CASE("memo persistence round trip") {
    std::string path = "memo_test_roundtrip.json";
    RecursionEngine eng(SpectralCurve::jt(15));
    eng.compute_all(3);
    eng.save(path);

    RecursionEngine fresh(SpectralCurve::jt(15));
    fresh.load(path);
    REQUIRE(fresh.memo().size() == eng.memo().size());
    for (const auto& [k, w] : eng.memo()) CHECK(w.terms() == fresh.memo().at(k).terms());

    // save -> load -> save is byte identical
    std::string path2 = "memo_test_roundtrip2.json";
    fresh.save(path2);
    std::ifstream f1(path), f2(path2);
    std::string s1((std::istreambuf_iterator<char>(f1)), {});
    std::string s2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(s1 == s2);

    // wrong curve id
    RecursionEngine other(SpectralCurve::airy(Rational(1), 9));
    CHECK_THROWS(other.load(path));

    // corrupt file
    std::ofstream bad("memo_test_corrupt.json");
    bad << "{\"version\":1,\"curve\":\"jt\",\"entries\":[{\"g\":";
    bad.close();
    RecursionEngine victim(SpectralCurve::jt(15));
    CHECK_THROWS(victim.load("memo_test_corrupt.json"));

    // version mismatch
    std::ofstream v2("memo_test_version.json");
    v2 << "{\"version\":2,\"curve\":\"jt\",\"entries\":[]}";
    v2.close();
    CHECK_THROWS(victim.load("memo_test_version.json"));

    std::remove(path.c_str());
    std::remove(path2.c_str());
    std::remove("memo_test_corrupt.json");
    std::remove("memo_test_version.json");
}
