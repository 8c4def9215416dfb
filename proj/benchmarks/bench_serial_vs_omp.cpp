// Timing comparison of the OpenMP kernels against their serial reference
// paths.  Each pair must produce bit-identical results; the benchmark
// asserts that before reporting.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "jtvol/ensembles.hpp"
#include "jtvol/recursion.hpp"

using namespace jtvol;

namespace {

using Clock = std::chrono::steady_clock;

template <typename Fn>
double time_s(Fn&& fn) {
    auto t0 = Clock::now();
    fn();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(const char* name, double serial, double parallel, bool identical) {
    if (!identical) {
        std::fprintf(stderr, "%s: serial and OpenMP results differ\n", name);
        std::exit(1);
    }
    std::printf("%-34s %10.3f s %10.3f s %8.2fx\n", name, serial, parallel,
                parallel > 0 ? serial / parallel : 0.0);
}

std::string run_mc(EnsembleKind kind, int N, int draws, ExecMode mode, double* secs) {
    EnsembleConfig cfg;
    cfg.kind = kind;
    cfg.N = N;
    cfg.draws = draws;
    cfg.seed = 1;
    if (kind == EnsembleKind::PolynomialPotential) {
        cfg.potential = {Rational(0), Rational(0), Rational(2)};
        cfg.chain = {8, 500, 0.5, 25};
    }
    cfg.mode = mode;
    std::string csv;
    *secs = time_s([&] { csv = sample(cfg).to_csv(); });
    return csv;
}

}  // namespace

int main() {
    std::printf("%-34s %12s %12s %9s\n", "kernel", "serial", "openmp", "speedup");

    {
        RecursionEngine serial(SpectralCurve::jt(17), ExecMode::Serial);
        RecursionEngine parallel(SpectralCurve::jt(17), ExecMode::OpenMP);
        double ts = time_s([&] { serial.compute_all(6); });
        double tp = time_s([&] { parallel.compute_all(6); });
        bool same = serial.memo().size() == parallel.memo().size();
        for (const auto& [k, w] : serial.memo())
            same = same && parallel.memo().count(k) && parallel.memo().at(k).terms() == w.terms();
        report("correlator table chi<=6", ts, tp, same);
    }

    {
        double ts, tp;
        std::string a = run_mc(EnsembleKind::GaussianHermitian, 200, 400, ExecMode::Serial, &ts);
        std::string b = run_mc(EnsembleKind::GaussianHermitian, 200, 400, ExecMode::OpenMP, &tp);
        report("gaussian tridiagonal N=200", ts, tp, a == b);
    }

    {
        double ts, tp;
        std::string a = run_mc(EnsembleKind::SusyBlock, 100, 800, ExecMode::Serial, &ts);
        std::string b = run_mc(EnsembleKind::SusyBlock, 100, 800, ExecMode::OpenMP, &tp);
        report("susy bidiagonal N=100", ts, tp, a == b);
    }

    {
        double ts, tp;
        std::string a = run_mc(EnsembleKind::PolynomialPotential, 8, 2000, ExecMode::Serial, &ts);
        std::string b = run_mc(EnsembleKind::PolynomialPotential, 8, 2000, ExecMode::OpenMP, &tp);
        report("metropolis log-gas N=8", ts, tp, a == b);
    }

    return 0;
}
