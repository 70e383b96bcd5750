#pragma once

#include <cstddef>
#include <vector>

#include "idkit/matrix.hpp"

namespace idkit {

/// Economy column-pivoted QR after `steps` pivot steps.
///
/// q has orthonormal columns (m×steps). r is steps×n: its leading `steps`
/// columns are upper triangular under the permutation, the rest hold the
/// projections of the remaining columns onto range(q). perm lists all n
/// column indices; the first `steps` entries are the pivot order.
struct PivotedQr {
    Matrix q;
    Matrix r;
    std::vector<std::size_t> perm;
    std::size_t steps = 0;
};

/// Householder QR with greedy largest-residual-norm column pivoting, run for
/// exactly max_steps steps. The pivot prefix is independent of max_steps:
/// stopping early yields the same leading pivots as the full factorization.
///
/// Pivot ties (residual norms within 1e-14 relative) break to the lowest
/// column index. Residual norms are tracked by squared-norm downdating and
/// recomputed from scratch once a column's tracked value falls below 1e-6
/// of its value at the last recompute.
///
/// Requires 1 ≤ max_steps ≤ min(rows, cols); throws std::invalid_argument
/// otherwise.
PivotedQr qr_column_pivoted(const Matrix& a, std::size_t max_steps);

} // namespace idkit
