#pragma once

#include <vector>

#include "idkit/matrix.hpp"

namespace idkit {

/// Economy SVD: u is m×r, vt is r×n with r = min(m, n);
/// u·diag(singular_values)·vt reconstructs the input.
struct SvdResult {
    Matrix u;
    std::vector<double> singular_values; // non-negative, non-increasing
    Matrix vt;
};

/// Golub–Kahan SVD: Householder bidiagonalization followed by implicit-shift
/// QR on the bidiagonal. Throws ConvergenceError if the iteration budget is
/// exhausted.
SvdResult svd(const Matrix& a);

/// Relative Frobenius error of the best rank-k approximation,
/// sqrt(Σ_{i>k} σᵢ²)/‖a‖_F. Requires 1 ≤ k ≤ min(m, n).
double truncated_svd_error(const Matrix& a, std::size_t k);

} // namespace idkit
