#pragma once

#include <string>

#include "jtvol/exact_scalar.hpp"

namespace jtvol {

// Numeric evaluation of ring elements by substituting high-precision
// pi and sqrt2 (MPFR working precision derived from `digits`).
//
// `digits` is the requested decimal precision and must be >= 15.  The
// returned double is the correctly rounded value of the high-precision
// result, so for digits > 17 the answer is exact to double resolution.
double evaluate_numeric(const ExactScalar& x, int digits = 20);

// Same evaluation, rendered as a decimal string with `digits` significant
// digits (used by the curve dump for audit-friendly output).
std::string evaluate_decimal(const ExactScalar& x, int digits = 20);

}  // namespace jtvol
