#pragma once

#include <string>
#include <vector>

#include "jtvol/io.hpp"

namespace jtvol {

enum class Suite { Fast, Full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;  // deterministic: no timings or timestamps
};

struct GoldenOverride {
    // Optional path to a golden-values JSON to check criterion 1 and 6
    // expectations against (in addition to the built-in oracle); empty
    // means use the built-in values only.
    std::string path;
};

// Runs every acceptance criterion.  The fast suite runs the exact and
// quadrature criteria at full strength and the Monte Carlo ones at
// reduced size (marked in the detail string).
std::vector<CriterionResult> run_acceptance(Suite suite, const GoldenOverride& golden = {});

bool all_pass(const std::vector<CriterionResult>& results);

// Deterministic report (byte-identical across runs of the same build).
Json acceptance_report(Suite suite, const std::vector<CriterionResult>& results);

}  // namespace jtvol
