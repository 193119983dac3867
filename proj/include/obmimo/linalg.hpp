#pragma once

#include "obmimo/cmatrix.hpp"

namespace obmimo {

// Lower-triangular L with A = L L^H for Hermitian positive definite A.
// Throws std::runtime_error when a squared pivot falls to pivot_tol or
// below, i.e. the matrix is not positive definite to working precision.
// The default matches the estimator's guard: the quantized-pilot
// autocorrelation stays well above this floor except in the fully coherent
// infinite-power limit.
CMatrix cholesky(const CMatrix& a, double pivot_tol = 1e-9);

// Solve A X = B for Hermitian positive definite A.
CMatrix hermitian_solve(const CMatrix& a, const CMatrix& b, double pivot_tol = 1e-9);

}  // namespace obmimo
