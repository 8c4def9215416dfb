#include "jtvol/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "jtvol/rng.hpp"
#include "jtvol/tridiag.hpp"

namespace jtvol {

namespace {

const char* kind_name(EnsembleKind k) {
    switch (k) {
        case EnsembleKind::GaussianHermitian: return "gaussian-hermitian";
        case EnsembleKind::PolynomialPotential: return "polynomial-potential";
        case EnsembleKind::SusyBlock: return "susy-block";
    }
    return "?";
}

std::string fmt17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

template <typename Fn>
void parallel_over(int count, ExecMode mode, Fn&& body) {
    if (mode == ExecMode::OpenMP) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int i = 0; i < count; ++i) body(i);
    } else {
        for (int i = 0; i < count; ++i) body(i);
    }
}

}  // namespace

void EnsembleConfig::validate() const {
    if (N < 1) throw std::invalid_argument("ensemble: N must be >= 1");
    if (draws < 1) throw std::invalid_argument("ensemble: draws must be >= 1");
    if (nu < 0) throw std::invalid_argument("ensemble: index nu must be >= 0");
    if (chain.step_size <= 0) throw std::invalid_argument("ensemble: step_size must be > 0");
    if (chain.burn_in < 0 || chain.steps < 1 || chain.draws_per_chain < 1)
        throw std::invalid_argument("ensemble: bad chain parameters");
    if (!potential.empty()) {
        if (kind == EnsembleKind::GaussianHermitian)
            throw std::invalid_argument("ensemble: gaussian-hermitian kind takes no potential");
        int deg = static_cast<int>(potential.size()) - 1;
        while (deg > 0 && potential[deg].is_zero()) --deg;
        if (deg == 0) throw std::invalid_argument("ensemble: potential must have degree >= 1");
        if (potential[deg].sign() <= 0)
            throw std::invalid_argument("ensemble: non-confining potential (leading coefficient)");
        // For hermitian eigenvalues on the whole real line the degree must
        // be even; the susy potential acts on lambda = mu^2 >= 0.
        if (kind == EnsembleKind::PolynomialPotential && deg % 2 != 0)
            throw std::invalid_argument("ensemble: non-confining potential (odd degree)");
    } else if (kind == EnsembleKind::PolynomialPotential) {
        throw std::invalid_argument("ensemble: polynomial-potential kind needs coefficients");
    }
}

double EnsembleConfig::potential_at(double lambda) const {
    double acc = 0.0;
    for (size_t j = potential.size(); j-- > 0;) acc = acc * lambda + potential[j].to_double();
    return acc;
}

Json EnsembleConfig::to_json() const {
    Json j;
    j["kind"] = kind_name(kind);
    j["N"] = N;
    j["draws"] = draws;
    j["seed"] = seed;
    Json pot = Json::array();
    for (const auto& c : potential) pot.push_back(c.str());
    j["potential"] = std::move(pot);
    j["nu"] = nu;
    j["chain"] = Json{{"steps", chain.steps},
                      {"burn_in", chain.burn_in},
                      {"step_size", chain.step_size},
                      {"draws_per_chain", chain.draws_per_chain}};
    j["mode"] = mode == ExecMode::OpenMP ? "openmp" : "serial";
    return j;
}

std::vector<double> SampleBatch::pooled() const {
    std::vector<double> all;
    for (const auto& d : draws) all.insert(all.end(), d.begin(), d.end());
    std::sort(all.begin(), all.end());
    return all;
}

std::string SampleBatch::to_csv() const {
    std::ostringstream os;
    for (const auto& d : draws) {
        for (size_t i = 0; i < d.size(); ++i) os << (i ? "," : "") << fmt17(d[i]);
        os << "\n";
    }
    return os.str();
}

Json SampleBatch::to_json() const {
    Json j;
    j["config"] = config.to_json();
    if (config.kind != EnsembleKind::GaussianHermitian) j["acceptance_rate"] = acceptance_rate;
    Json rows = Json::array();
    for (const auto& d : draws) {
        Json row = Json::array();
        for (double x : d) row.push_back(fmt17(x));
        rows.push_back(std::move(row));
    }
    j["draws"] = std::move(rows);
    return j;
}

SampleBatch sample_gaussian(const EnsembleConfig& config) {
    config.validate();
    const int N = config.N;
    SampleBatch batch;
    batch.config = config;
    batch.draws.resize(config.draws);
    const double scale = 1.0 / (2.0 * std::sqrt(static_cast<double>(N)));
    parallel_over(config.draws, config.mode, [&](int i) {
        Rng rng(config.seed, static_cast<std::uint64_t>(i));
        std::vector<double> d(N), e(N > 1 ? N - 1 : 0);
        for (int j = 0; j < N; ++j) d[j] = rng.normal();
        for (int j = 0; j < N - 1; ++j) e[j] = std::sqrt(0.5 * rng.chisq_even(N - 1 - j));
        std::vector<double> lambda = tridiagonal_eigenvalues(std::move(d), std::move(e));
        for (double& x : lambda) x *= scale;
        batch.draws[i] = std::move(lambda);
    });
    return batch;
}

namespace {

// One Metropolis chain over the log-gas
//   log p = 2 sum_{i<j} log|l_i - l_j| - N sum T(l_k)      (hermitian)
//   log p = sum_{i<j} 2 log|l_i^2 - l_j^2|
//           + (2 nu + 1) sum log l_i - N sum T(l_i^2)      (susy, l > 0)
struct LogGas {
    const EnsembleConfig* cfg;
    bool susy;

    double site_logdensity(const std::vector<double>& l, int j, double x) const {
        if (susy && x <= 0.0) return -1e300;
        double acc = 0.0;
        for (int i = 0; i < static_cast<int>(l.size()); ++i) {
            if (i == j) continue;
            double diff = susy ? x * x - l[i] * l[i] : x - l[i];
            if (diff == 0.0) return -1e300;
            acc += 2.0 * std::log(std::fabs(diff));
        }
        if (susy) {
            acc += (2.0 * cfg->nu + 1.0) * std::log(x);
            acc -= cfg->N * cfg->potential_at(x * x);
        } else {
            acc -= cfg->N * cfg->potential_at(x);
        }
        return acc;
    }
};

struct ChainResult {
    std::vector<std::vector<double>> draws;
    long accepted = 0;
    long proposed = 0;
};

ChainResult run_chain(const EnsembleConfig& cfg, std::uint64_t chain_id, int want, bool susy) {
    const int N = cfg.N;
    Rng rng(cfg.seed, chain_id);
    LogGas gas{&cfg, susy};

    std::vector<double> state(N);
    for (int j = 0; j < N; ++j)
        state[j] = susy ? 0.5 + 0.1 * (j + 1.0) / N + 0.2 * rng.uniform01()
                        : 0.5 * (2.0 * rng.uniform01() - 1.0) + 0.1 * (j - 0.5 * N);

    double step = cfg.chain.step_size;
    long window_acc = 0, window_prop = 0;
    ChainResult out;

    auto sweep = [&](bool adapt, bool count) {
        for (int j = 0; j < N; ++j) {
            double x = state[j] + step * rng.normal();
            double delta = gas.site_logdensity(state, j, x) - gas.site_logdensity(state, j, state[j]);
            bool accept = delta >= 0.0 || std::log(1.0 - rng.uniform01()) < delta;
            if (accept) state[j] = x;
            ++window_prop;
            window_acc += accept;
            if (count) {
                ++out.proposed;
                out.accepted += accept;
            }
        }
        // Target 30-50% acceptance while adapting; frozen afterwards to
        // preserve detailed balance.
        if (adapt && window_prop >= 50 * N) {
            double rate = static_cast<double>(window_acc) / window_prop;
            if (rate < 0.30) step *= 0.85;
            else if (rate > 0.50) step *= 1.15;
            window_acc = window_prop = 0;
        }
    };

    int adapt_until = (cfg.chain.burn_in * 4) / 5;
    for (int s = 0; s < cfg.chain.burn_in; ++s) sweep(s < adapt_until, false);
    for (int k = 0; k < want; ++k) {
        for (int s = 0; s < cfg.chain.steps; ++s) sweep(false, true);
        std::vector<double> draw = state;
        if (susy)
            for (double& x : draw) x *= x;
        std::sort(draw.begin(), draw.end());
        out.draws.push_back(std::move(draw));
    }
    return out;
}

SampleBatch metropolis_batch(const EnsembleConfig& cfg, bool susy) {
    SampleBatch batch;
    batch.config = cfg;
    batch.draws.resize(cfg.draws);
    int per = cfg.chain.draws_per_chain;
    int chains = (cfg.draws + per - 1) / per;
    std::vector<ChainResult> results(chains);
    parallel_over(chains, cfg.mode, [&](int c) {
        int want = std::min(per, cfg.draws - c * per);
        results[c] = run_chain(cfg, static_cast<std::uint64_t>(c), want, susy);
    });
    long acc = 0, prop = 0;
    for (int c = 0; c < chains; ++c) {
        for (int k = 0; k < static_cast<int>(results[c].draws.size()); ++k)
            batch.draws[c * per + k] = std::move(results[c].draws[k]);
        acc += results[c].accepted;
        prop += results[c].proposed;
    }
    batch.acceptance_rate = prop > 0 ? static_cast<double>(acc) / prop : 0.0;
    return batch;
}

}  // namespace

SampleBatch sample_potential_metropolis(const EnsembleConfig& config) {
    config.validate();
    if (config.kind != EnsembleKind::PolynomialPotential)
        throw std::invalid_argument("sample_potential_metropolis: wrong ensemble kind");
    return metropolis_batch(config, false);
}

SampleBatch sample_susy(const EnsembleConfig& config) {
    config.validate();
    if (config.kind != EnsembleKind::SusyBlock)
        throw std::invalid_argument("sample_susy: wrong ensemble kind");

    // Degree-1 T (or none) is the Gaussian case: exact bidiagonal route.
    int deg = 0;
    for (size_t j = 1; j < config.potential.size(); ++j)
        if (!config.potential[j].is_zero()) deg = static_cast<int>(j);
    if (deg > 1) return metropolis_batch(config, true);

    const int N = config.N, nu = config.nu;
    SampleBatch batch;
    batch.config = config;
    batch.draws.resize(config.draws);
    // weight e^{-N c sum lambda} maps to the unit-coefficient law by
    // lambda -> lambda / c
    double c = config.potential.size() > 1 ? config.potential[1].to_double() : 1.0;
    const double scale = 1.0 / (2.0 * N * c);
    parallel_over(config.draws, config.mode, [&](int i) {
        Rng rng(config.seed, static_cast<std::uint64_t>(i));
        // Lower-bidiagonal factor: diag chi_{2(nu+N)} .. chi_{2(nu+1)},
        // subdiag chi_{2(N-1)} .. chi_2; eigenvalues of B B^T follow the
        // hard-edge log-gas with index nu.
        std::vector<double> b(N), c(N > 1 ? N - 1 : 0);
        for (int j = 0; j < N; ++j) b[j] = std::sqrt(rng.chisq_even(nu + N - j));
        for (int j = 0; j < N - 1; ++j) c[j] = std::sqrt(rng.chisq_even(N - 1 - j));
        std::vector<double> d(N), e(N > 1 ? N - 1 : 0);
        for (int j = 0; j < N; ++j) d[j] = b[j] * b[j] + (j > 0 ? c[j - 1] * c[j - 1] : 0.0);
        for (int j = 0; j < N - 1; ++j) e[j] = b[j] * c[j];
        std::vector<double> lambda = tridiagonal_eigenvalues(std::move(d), std::move(e));
        for (double& x : lambda) x = std::max(x, 0.0) * scale;
        batch.draws[i] = std::move(lambda);
    });
    return batch;
}

SampleBatch sample(const EnsembleConfig& config) {
    switch (config.kind) {
        case EnsembleKind::GaussianHermitian: return sample_gaussian(config);
        case EnsembleKind::PolynomialPotential: return sample_potential_metropolis(config);
        case EnsembleKind::SusyBlock: return sample_susy(config);
    }
    throw std::logic_error("sample: unknown ensemble kind");
}

std::vector<double> q_spectrum(const SampleBatch& batch) {
    std::vector<double> mu;
    mu.reserve(batch.draws.size() * batch.config.N);
    for (size_t i = 0; i < batch.draws.size(); ++i) {
        Rng rng(batch.config.seed ^ 0x5157ULL, static_cast<std::uint64_t>(i));
        for (double E : batch.draws[i]) {
            double m = std::sqrt(std::max(E, 0.0));
            mu.push_back(rng.uniform01() < 0.5 ? -m : m);
        }
    }
    std::sort(mu.begin(), mu.end());
    return mu;
}

}  // namespace jtvol
