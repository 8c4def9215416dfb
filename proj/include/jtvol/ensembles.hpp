#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jtvol/io.hpp"
#include "jtvol/rational.hpp"
#include "jtvol/recursion.hpp"  // ExecMode

namespace jtvol {

enum class EnsembleKind { GaussianHermitian, PolynomialPotential, SusyBlock };

struct ChainParams {
    int steps = 10;        // post-burn-in sweeps between recorded draws
    int burn_in = 500;     // sweeps discarded per chain (step size adapts here)
    double step_size = 0.5;
    int draws_per_chain = 25;
};

struct EnsembleConfig {
    EnsembleKind kind = EnsembleKind::GaussianHermitian;
    int N = 1;
    int draws = 1;
    std::uint64_t seed = 1;
    std::vector<Rational> potential;  // T coefficients, degree ascending; empty = Gaussian
    int nu = 0;                       // susy index
    ChainParams chain;
    ExecMode mode = ExecMode::OpenMP;

    // Validates sizes and confinement; throws on a bad configuration.
    void validate() const;
    double potential_at(double lambda) const;
    Json to_json() const;
};

struct SampleBatch {
    EnsembleConfig config;
    std::vector<std::vector<double>> draws;  // each sorted ascending
    double acceptance_rate = 0.0;            // Metropolis kinds only

    std::vector<double> pooled() const;

    // One row per draw, eigenvalues ascending, %.17g (byte-stable).
    std::string to_csv() const;
    Json to_json() const;
};

// Dispatches on config.kind; identical output in Serial and OpenMP modes.
SampleBatch sample(const EnsembleConfig& config);

// Gaussian unitary-class ensemble via the tridiagonal reduction,
// normalized so the N->infinity density is (2/pi) sqrt(1-x^2) on [-1,1].
SampleBatch sample_gaussian(const EnsembleConfig& config);

// Log-gas Metropolis for the eigenvalue density
// prod_{i<j} (l_i-l_j)^2 exp(-N sum T(l_k)).
SampleBatch sample_potential_metropolis(const EnsembleConfig& config);

// H = P Pdag with P an (N+nu) x N complex Gaussian block: the N nonzero
// eigenvalues, via the bidiagonal reduction; the nu exact zero modes are
// implicit.  A nonempty potential of degree >= 2 switches to Metropolis
// on singular values with the hard-edge Jacobian.
SampleBatch sample_susy(const EnsembleConfig& config);

// Signed Q-spectrum derived from an H batch: each eigenvalue E maps to
// mu = +-sqrt(E) with a substream-determined sign, realizing the
// Q -> -Q invariant spectral law.
std::vector<double> q_spectrum(const SampleBatch& batch);

}  // namespace jtvol
