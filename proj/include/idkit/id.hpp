#pragma once

#include <cstdint>
#include <vector>

#include "idkit/matrix.hpp"

namespace idkit {

/// Rank-k interpolative decomposition A ≈ C·Z, where C = A[:, cols] is a
/// literal column subset and Z carries a k×k identity block on those columns.
///
/// When `transposed` is true the decomposition was computed on Aᵀ (tall
/// inputs): `cols` then indexes rows of A, z is k×rows(A), and in original
/// orientation A ≈ zᵀ·A[cols, :]. `approx` is always stored in the original
/// orientation of A.
struct IdResult {
    std::vector<std::size_t> cols;
    Matrix z;
    Matrix approx;
    bool transposed = false;
};

/// Measured properties of a decomposition; the |Z| ≤ 2 bound is reported,
/// never enforced.
struct IdDiagnostics {
    double relative_error = 0.0;   // ‖A − approx‖_F / ‖A‖_F
    double max_abs_z = 0.0;        // largest |Z entry|
    double identity_deviation = 0.0; // max-entry norm of Z[:, cols] − I
    bool entry_bound_satisfied = false; // max_abs_z ≤ 2 + 1e-12
};

/// Deterministic rank-k ID. Columns are the first k pivots of the
/// column-pivoted QR of a, run for k steps; Z solves RₖᵀRₖ·Z = CᵀA through
/// the positive-definite (Cholesky) path. Z is the least-squares minimizer
/// of ‖A − CZ‖_F for the chosen C.
///
/// Requires 1 ≤ k ≤ min(m, n) and rank(a) ≥ k; a rank-deficient input
/// surfaces as NotPositiveDefiniteError from the solve.
IdResult optim_id(const Matrix& a, std::size_t k);

/// Randomized rank-k ID. Samples p = k + floor(oversampling_fraction·k)
/// distinct columns uniformly without replacement (p clamped to n), runs the
/// pivoted QR on the sampled submatrix for k steps, and solves
/// RₖᵀRₖ·Z = CᵀA through the symmetric-indefinite (LDLᵀ) path. A sampled
/// submatrix of rank < k surfaces as SingularMatrixError.
IdResult optim_rid(const Matrix& a, std::size_t k, double oversampling_fraction,
                   std::uint64_t seed);

enum class IdMethod { deterministic, randomized };

/// Orientation-aware entry point: wide or square inputs run directly; tall
/// inputs (m > n) are decomposed through their transpose and returned with
/// transposed = true, approx re-transposed into the original orientation.
IdResult id_auto(const Matrix& a, std::size_t k, IdMethod method, std::uint64_t seed,
                 double oversampling_fraction = 0.2);

/// Relative error, max |Z| entry, identity-block deviation, and the entry
/// bound flag for a computed decomposition against its source matrix.
IdDiagnostics diagnostics(const Matrix& a, const IdResult& result);

} // namespace idkit
