#pragma once

#include <vector>

namespace jtvol {

// Eigenvalues of a symmetric tridiagonal matrix by the implicit-shift QL
// iteration (no eigenvectors).  `diag` has size n, `off` size n-1, with
// off[i] coupling rows i and i+1.  Returns the spectrum sorted ascending.
std::vector<double> tridiagonal_eigenvalues(std::vector<double> diag, std::vector<double> off);

}  // namespace jtvol
