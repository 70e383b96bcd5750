#pragma once

#include "idkit/matrix.hpp"

namespace idkit {

enum class Triangle { lower, upper };

/// Solve t·X = b by forward (lower) or back (upper) substitution, reading
/// only the selected triangle of t. Diagonal entries with |t(i,i)| ≤ 1e-300
/// raise SingularMatrixError.
Matrix solve_triangular(const Matrix& t, const Matrix& b, Triangle side);

/// Solve s·X = b for symmetric positive definite s: Cholesky factorization
/// followed by two triangular solves. A non-positive pivot raises
/// NotPositiveDefiniteError.
Matrix solve_posdef(const Matrix& s, const Matrix& b);

/// Solve s·X = b for symmetric (possibly indefinite) s via LDLᵀ with
/// Bunch–Kaufman 1×1/2×2 diagonal pivoting. The input is symmetrized as
/// (s + sᵀ)/2 before factoring. An exactly singular pivot block raises
/// SingularMatrixError.
Matrix solve_symmetric_indefinite(const Matrix& s, const Matrix& b);

} // namespace idkit
