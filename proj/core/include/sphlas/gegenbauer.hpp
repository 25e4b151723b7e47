#pragma once

#include "sphlas/polynomial.hpp"

#include <vector>

namespace sphlas {

// Coefficients (in powers of the inner product s) of the Gegenbauer
// polynomial C_k^{(n/2 - 1)}(s) with the dimension n symbolic.
std::vector<RatFuncN> gegenbauer_raw(unsigned k);

// Same, normalized to value 1 at s = 1. These are the positive-definite
// zonal kernels of the sphere S^{n-1}.
std::vector<RatFuncN> gegenbauer_normalized(unsigned k);

// Evaluate a coefficient list at rational (n, s).
Rat eval_poly_in_s(const std::vector<RatFuncN>& coeffs, const Rat& n, const Rat& s);

}  // namespace sphlas
