#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "jtvol/ensembles.hpp"
#include "jtvol/rng.hpp"
#include "jtvol/stats.hpp"
#include "jtvol/quadrature.hpp"
#include "jtvol/tridiag.hpp"

using namespace jtvol;

TEST_CASE("rng determinism and substream independence") {
    Rng a(42, 3), b(42, 3), c(42, 4);
    bool same = true, differ = false;
    for (int i = 0; i < 64; ++i) {
        auto x = a.next_u64();
        same = same && (x == b.next_u64());
        differ = differ || (x != c.next_u64());
    }
    CHECK(same);
    CHECK(differ);

    Rng u(7);
    for (int i = 0; i < 1000; ++i) {
        double x = u.uniform01();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
    }
}

TEST_CASE("chi-square and normal moments") {
    Rng rng(2024);
    double acc = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) acc += rng.chisq_even(5);  // dof 10, mean 10
    CHECK(acc / n == doctest::Approx(10.0).epsilon(0.02));

    double m = 0.0, v = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal();
        m += x;
        v += x * x;
    }
    CHECK(m / n == doctest::Approx(0.0).epsilon(0.05));
    CHECK(std::fabs(m / n) < 0.03);
    CHECK(v / n == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("tridiagonal eigenvalues") {
    CHECK(tridiagonal_eigenvalues({5.0}, {}) == std::vector<double>{5.0});

    auto e2 = tridiagonal_eigenvalues({2.0, 2.0}, {1.0});
    CHECK(e2[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e2[1] == doctest::Approx(3.0).epsilon(1e-12));

    auto e3 = tridiagonal_eigenvalues({3.0, 1.0, 2.0}, {0.0, 0.0});
    CHECK(e3[0] == doctest::Approx(1.0));
    CHECK(e3[1] == doctest::Approx(2.0));
    CHECK(e3[2] == doctest::Approx(3.0));

    // trace and Frobenius invariants on a random instance
    Rng rng(5);
    int n = 60;
    std::vector<double> d(n), e(n - 1);
    for (auto& x : d) x = rng.normal();
    for (auto& x : e) x = rng.normal();
    auto lam = tridiagonal_eigenvalues(d, e);
    double tr = std::accumulate(d.begin(), d.end(), 0.0);
    double fro = 0.0;
    for (double x : d) fro += x * x;
    for (double x : e) fro += 2 * x * x;
    double sum = std::accumulate(lam.begin(), lam.end(), 0.0);
    double sum2 = 0.0;
    for (double x : lam) sum2 += x * x;
    CHECK(sum == doctest::Approx(tr).epsilon(1e-10));
    CHECK(sum2 == doctest::Approx(fro).epsilon(1e-10));
    CHECK(std::is_sorted(lam.begin(), lam.end()));
}

TEST_CASE("gaussian ensemble: N=1 scalar and pooled symmetry") {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::GaussianHermitian;
    cfg.N = 1;
    cfg.draws = 4000;
    cfg.seed = 11;
    SampleBatch b = sample_gaussian(cfg);
    MeanSE m = batch_mean(b.draws, [](double x) { return x; });
    CHECK(std::fabs(m.mean) <= 3.0 * m.se);

    cfg.N = 64;
    cfg.draws = 150;
    SampleBatch big = sample_gaussian(cfg);
    MeanSE pooled = batch_mean(big.draws, [](double x) { return x; });
    CHECK(std::fabs(pooled.mean) <= 3.0 * pooled.se);
    // E[mean of lambda^2] = 1/4 exactly at any N in this normalization
    MeanSE second = batch_mean(big.draws, [](double x) { return x * x; });
    CHECK(std::fabs(second.mean - 0.25) <= 3.0 * second.se);
    for (const auto& d : big.draws) CHECK(std::is_sorted(d.begin(), d.end()));
    CHECK(big.draws.size() == 150);
    EnsembleConfig bad;
    bad.kind = EnsembleKind::GaussianHermitian;
    bad.N = 0;
    CHECK_THROWS(sample_gaussian(bad));
}

TEST_CASE("semicircle convergence at moderate size") {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::GaussianHermitian;
    cfg.N = 100;
    cfg.draws = 100;
    cfg.seed = 20240708;
    SampleBatch b = sample_gaussian(cfg);
    ReferenceDensity ref = semicircle_reference();
    HistogramStats h = histogram_and_stats(b.pooled(), &ref, 40, -1.1, 1.1, true);
    CHECK(histogram_sup_distance(h, ref) <= 0.05);
    CHECK(h.ks <= 0.02);
}

TEST_CASE("sup error shrinks when N doubles at fixed draw count") {
    ReferenceDensity ref = semicircle_reference();
    auto sup_at = [&](int N) {
        EnsembleConfig cfg;
        cfg.kind = EnsembleKind::GaussianHermitian;
        cfg.N = N;
        cfg.draws = 200;
        cfg.seed = 31415;
        HistogramStats h = histogram_and_stats(sample_gaussian(cfg).pooled(), nullptr, 40, -1.1, 1.1, true);
        return histogram_sup_distance(h, ref);
    };
    double s100 = sup_at(100), s200 = sup_at(200);
    CHECK(s200 <= 0.5 * s100 + 0.01);  // halving within a noise allowance
}

TEST_CASE("metropolis: N=1 quadratic reproduces the scalar gaussian") {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::PolynomialPotential;
    cfg.N = 1;
    cfg.draws = 10000;
    cfg.seed = 99;
    cfg.potential = {Rational(0), Rational(0), Rational(1)};  // T = x^2, weight e^{-x^2}
    cfg.chain = {4, 300, 0.8, 100};
    SampleBatch b = sample_potential_metropolis(cfg);
    CHECK(b.acceptance_rate > 0.2);
    CHECK(b.acceptance_rate < 0.7);
    ReferenceDensity ref = gaussian_reference(0.0, std::sqrt(0.5));
    CHECK(ks_statistic(b.pooled(), ref) <= 0.05);
}

TEST_CASE("metropolis: N=1 second moment against direct quadrature") {
    // target density prop. to e^{-x^2}; <x^2> by 1D quadrature
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::PolynomialPotential;
    cfg.N = 1;
    cfg.draws = 30000;
    cfg.seed = 555;
    cfg.potential = {Rational(0), Rational(0), Rational(1)};
    cfg.chain = {15, 300, 0.8, 25};
    SampleBatch b = sample_potential_metropolis(cfg);
    MeanSE m = batch_mean(b.draws, [](double x) { return x * x; });
    double num = adaptive_simpson([](double x) { return x * x * std::exp(-x * x); }, -9.0, 9.0, 1e-12);
    double den = adaptive_simpson([](double x) { return std::exp(-x * x); }, -9.0, 9.0, 1e-12);
    CHECK(std::fabs(m.mean - num / den) / (num / den) <= 0.02);
}

TEST_CASE("metropolis matches the tridiagonal sampler on the quadratic potential") {
    // T = 2 lambda^2 targets the same law as the gaussian route
    EnsembleConfig mc;
    mc.kind = EnsembleKind::PolynomialPotential;
    mc.N = 8;
    mc.draws = 1500;
    mc.seed = 3;
    mc.potential = {Rational(0), Rational(0), Rational(2)};
    mc.chain = {6, 400, 0.4, 30};
    SampleBatch metro = sample_potential_metropolis(mc);

    EnsembleConfig gcfg;
    gcfg.kind = EnsembleKind::GaussianHermitian;
    gcfg.N = 8;
    gcfg.draws = 1500;
    gcfg.seed = 4;
    SampleBatch gauss = sample_gaussian(gcfg);

    MeanSE m2a = batch_mean(metro.draws, [](double x) { return x * x; });
    MeanSE m2b = batch_mean(gauss.draws, [](double x) { return x * x; });
    double se = std::hypot(m2a.se, m2b.se);
    CHECK(std::fabs(m2a.mean - m2b.mean) <= 3.0 * se);

    MeanSE m4a = batch_mean(metro.draws, [](double x) { return x * x * x * x; });
    MeanSE m4b = batch_mean(gauss.draws, [](double x) { return x * x * x * x; });
    CHECK(std::fabs(m4a.mean - m4b.mean) <= 3.0 * std::hypot(m4a.se, m4b.se));
}

TEST_CASE("non-confining potentials rejected at config time") {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::PolynomialPotential;
    cfg.N = 2;
    cfg.draws = 1;
    cfg.potential = {Rational(0), Rational(1)};  // odd degree
    CHECK_THROWS(cfg.validate());
    cfg.potential = {Rational(0), Rational(0), Rational(-1)};  // negative leading
    CHECK_THROWS(cfg.validate());
    cfg.potential = {};
    CHECK_THROWS(cfg.validate());  // potential kind without coefficients
    cfg.potential = {Rational(0), Rational(0), Rational(0), Rational(0), Rational(1)};
    CHECK_NOTHROW(cfg.validate());
    cfg.chain.step_size = 0.0;
    CHECK_THROWS(cfg.validate());
}

TEST_CASE("susy block: nonnegative spectrum, Q symmetry, determinism") {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::SusyBlock;
    cfg.N = 40;
    cfg.draws = 120;
    cfg.nu = 0;
    cfg.seed = 606;
    SampleBatch b = sample_susy(cfg);
    for (const auto& d : b.draws) {
        CHECK(std::is_sorted(d.begin(), d.end()));
        CHECK(d.front() >= 0.0);
        CHECK(static_cast<int>(d.size()) == cfg.N);
    }

    // Q -> -Q: signed spectrum symmetric around zero
    std::vector<double> mu = q_spectrum(b);
    double mean = std::accumulate(mu.begin(), mu.end(), 0.0) / mu.size();
    double var = 0.0;
    for (double x : mu) var += (x - mean) * (x - mean);
    var /= (mu.size() - 1.0);
    CHECK(std::fabs(mean) <= 3.0 * std::sqrt(var / mu.size()));

    SampleBatch again = sample_susy(cfg);
    CHECK(again.to_csv() == b.to_csv());

    cfg.nu = -1;
    CHECK_THROWS(sample_susy(cfg));
}

TEST_CASE("susy hard-edge slope at reduced size") {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::SusyBlock;
    cfg.N = 60;
    cfg.draws = 250;
    cfg.nu = 0;
    cfg.seed = 7011;
    SampleBatch b = sample_susy(cfg);
    double slope = fit_log_slope(b.pooled(), std::exp(-6.0), std::exp(-2.0), 8);
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.4));
}

TEST_CASE("susy gaussian route respects the linear coefficient") {
    // weight e^{-N c sum lambda}: doubling c halves the spectrum
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::SusyBlock;
    cfg.N = 20;
    cfg.draws = 30;
    cfg.nu = 1;
    cfg.seed = 33;
    cfg.potential = {Rational(0), Rational(1)};
    SampleBatch unit = sample_susy(cfg);
    cfg.potential = {Rational(0), Rational(2)};
    SampleBatch twice = sample_susy(cfg);
    for (size_t i = 0; i < unit.draws.size(); ++i)
        for (size_t j = 0; j < unit.draws[i].size(); ++j)
            CHECK(twice.draws[i][j] == doctest::Approx(0.5 * unit.draws[i][j]).epsilon(1e-15));
}

TEST_CASE("susy metropolis: N=2 mean eigenvalue against direct quadrature") {
    // T(l) = l^2, nu = 0: joint density in mu prop. to
    // (mu1^2-mu2^2)^2 (mu1 mu2) e^{-2(mu1^4+mu2^4)} on mu > 0
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::SusyBlock;
    cfg.N = 2;
    cfg.draws = 16000;
    cfg.nu = 0;
    cfg.seed = 868;
    cfg.potential = {Rational(0), Rational(0), Rational(1)};
    cfg.chain = {12, 400, 0.35, 25};
    SampleBatch b = sample_susy(cfg);
    MeanSE m = batch_mean(b.draws, [](double lambda) { return lambda; });

    const double L = 2.2;
    const int n = 400;
    const double hstep = L / n;
    auto weight = [n](int i) { return i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0); };
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= n; ++i) {
        double x = i * hstep;
        for (int j = 0; j <= n; ++j) {
            double y = j * hstep;
            double d2 = (x * x - y * y) * (x * x - y * y);
            double f = d2 * x * y * std::exp(-2.0 * (std::pow(x, 4) + std::pow(y, 4)));
            num += weight(i) * weight(j) * f * 0.5 * (x * x + y * y);
            den += weight(i) * weight(j) * f;
        }
    }
    double want = num / den;
    CHECK(std::fabs(m.mean - want) / want <= 0.03);
}

TEST_CASE("susy metropolis route for a quartic T") {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::SusyBlock;
    cfg.N = 4;
    cfg.draws = 400;
    cfg.nu = 1;
    cfg.seed = 17;
    cfg.potential = {Rational(0), Rational(0), Rational(1)};  // T(l) = l^2, quartic in mu
    cfg.chain = {5, 300, 0.3, 40};
    SampleBatch b = sample_susy(cfg);
    for (const auto& d : b.draws) {
        CHECK(d.front() > 0.0);
        CHECK(std::is_sorted(d.begin(), d.end()));
    }
    CHECK(b.acceptance_rate > 0.15);
}

TEST_CASE("samplers are schedule independent") {
    for (EnsembleKind kind :
         {EnsembleKind::GaussianHermitian, EnsembleKind::PolynomialPotential, EnsembleKind::SusyBlock}) {
        EnsembleConfig cfg;
        cfg.kind = kind;
        cfg.N = kind == EnsembleKind::PolynomialPotential ? 3 : 24;
        cfg.draws = 60;
        cfg.seed = 1234;
        if (kind == EnsembleKind::PolynomialPotential) {
            cfg.potential = {Rational(0), Rational(0), Rational(2)};
            cfg.chain = {4, 120, 0.5, 12};
        }
        cfg.mode = ExecMode::Serial;
        std::string serial = sample(cfg).to_csv();
        cfg.mode = ExecMode::OpenMP;
        std::string parallel = sample(cfg).to_csv();
        CHECK(serial == parallel);
    }
}

TEST_CASE("histogram and stats plumbing") {
    // uniform synthetic sample vs uniform reference: KS shrinks with size
    ReferenceDensity uni = uniform_reference(0.0, 1.0);
    auto make_uniform = [](int n) {
        Rng rng(8);
        std::vector<double> v(n);
        for (auto& x : v) x = rng.uniform01();
        std::sort(v.begin(), v.end());
        return v;
    };
    double ks_small = ks_statistic(make_uniform(500), uni);
    double ks_large = ks_statistic(make_uniform(50000), uni);
    CHECK(ks_large < ks_small);
    CHECK(ks_large < 0.02);

    // semicircle reference normalizes to 1 by quadrature
    CHECK(semicircle_reference().norm() == doctest::Approx(1.0).epsilon(1e-8));

    // slope fit on synthetic E^{-1/2} draws (E = Emax u^2)
    Rng rng(9);
    std::vector<double> edge(200000);
    for (auto& x : edge) {
        double u = rng.uniform01();
        x = 4.0 * u * u;
    }
    std::sort(edge.begin(), edge.end());
    double slope = fit_log_slope(edge, 1e-4, 1e-1, 12);
    CHECK(slope == doctest::Approx(-0.5).epsilon(0.1));

    std::vector<double> sample{0.1, 0.2, 0.9};
    CHECK_THROWS(histogram_and_stats({}, nullptr, 10, 0, 1));
    CHECK_THROWS(histogram_and_stats(sample, nullptr, 0, 0, 1));
    CHECK_THROWS(histogram_and_stats(sample, nullptr, 10, 1, 1));       // zero width
    CHECK_THROWS(histogram_and_stats(sample, nullptr, 10, 0.0, 0.5));   // outside, no clip
    HistogramStats h = histogram_and_stats(sample, nullptr, 10, 0.0, 1.0);
    double mass = 0.0;
    for (size_t i = 0; i < h.density.size(); ++i) mass += h.density[i] * (h.edges[i + 1] - h.edges[i]);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("batch export formats") {
    EnsembleConfig cfg;
    cfg.kind = EnsembleKind::GaussianHermitian;
    cfg.N = 3;
    cfg.draws = 4;
    cfg.seed = 5;
    SampleBatch b = sample_gaussian(cfg);
    std::string csv = b.to_csv();
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    Json j = b.to_json();
    CHECK(j["config"]["N"] == 3);
    CHECK(j["config"]["seed"] == 5);
    CHECK(j["config"]["kind"] == "gaussian-hermitian");
    CHECK(j["draws"].size() == 4);
}
