#include "idkit/id.hpp"

#include <cmath>
#include <stdexcept>

#include "idkit/qr.hpp"
#include "idkit/random.hpp"
#include "idkit/solve.hpp"

namespace idkit {

namespace {

void require_rank_in_range(const Matrix& a, std::size_t k, const char* op) {
    if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument(std::string(op) + ": empty matrix");
    if (k < 1 || k > std::min(a.rows(), a.cols()))
        throw std::invalid_argument(std::string(op) + ": k must lie in [1, min(rows, cols)]");
}

Matrix leading_block(const Matrix& r, std::size_t k) {
    Matrix out(k, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i <= j; ++i) out(i, j) = r(i, j);
    return out;
}

} // namespace

IdResult optim_id(const Matrix& a, std::size_t k) {
    require_rank_in_range(a, k, "optim_id");

    const PivotedQr f = qr_column_pivoted(a, k);
    std::vector<std::size_t> cols(f.perm.begin(), f.perm.begin() + k);
    const Matrix c = select_columns(a, cols);
    const Matrix rk = leading_block(f.r, k);

    // R_kᵀR_k Z = CᵀA, the normal equations of min ‖A − CZ‖_F with the
    // Gram matrix expressed through the triangular factor.
    const Matrix gram = matmul_transpose_a(rk, rk);
    const Matrix rhs = matmul_transpose_a(c, a);
    Matrix z = solve_posdef(gram, rhs);
    Matrix approx = matmul(c, z);

    return IdResult{std::move(cols), std::move(z), std::move(approx), false};
}

IdResult optim_rid(const Matrix& a, std::size_t k, double oversampling_fraction,
                   std::uint64_t seed) {
    require_rank_in_range(a, k, "optim_rid");
    if (!(oversampling_fraction >= 0.0))
        throw std::invalid_argument("optim_rid: oversampling_fraction must be non-negative");

    const std::size_t n = a.cols();
    std::size_t p = k + static_cast<std::size_t>(oversampling_fraction * static_cast<double>(k));
    p = std::min(p, n);

    RandomEngine rng = seeded_engine(seed);
    const std::vector<std::size_t> sampled = sample_without_replacement(n, p, rng);
    const Matrix as = select_columns(a, sampled);

    const PivotedQr f = qr_column_pivoted(as, k);
    std::vector<std::size_t> local(f.perm.begin(), f.perm.begin() + k);
    std::vector<std::size_t> cols(k);
    for (std::size_t i = 0; i < k; ++i) cols[i] = sampled[local[i]];
    const Matrix c = select_columns(as, local);
    const Matrix rk = leading_block(f.r, k);

    // The sampled columns may be rank deficient, so R_kᵀR_k is only known
    // to be symmetric; a singular factor surfaces as the solve's error.
    const Matrix gram = matmul_transpose_a(rk, rk);
    const Matrix rhs = matmul_transpose_a(c, a);
    Matrix z = solve_symmetric_indefinite(gram, rhs);
    Matrix approx = matmul(c, z);

    return IdResult{std::move(cols), std::move(z), std::move(approx), false};
}

IdResult id_auto(const Matrix& a, std::size_t k, IdMethod method, std::uint64_t seed,
                 double oversampling_fraction) {
    require_rank_in_range(a, k, "id_auto");
    if (a.rows() <= a.cols()) {
        return method == IdMethod::deterministic ? optim_id(a, k)
                                                 : optim_rid(a, k, oversampling_fraction, seed);
    }
    const Matrix at = transpose(a);
    IdResult dual = method == IdMethod::deterministic
                        ? optim_id(at, k)
                        : optim_rid(at, k, oversampling_fraction, seed);
    IdResult out;
    out.cols = std::move(dual.cols); // row indices of a
    out.z = std::move(dual.z);
    out.approx = transpose(dual.approx);
    out.transposed = true;
    return out;
}

IdDiagnostics diagnostics(const Matrix& a, const IdResult& result) {
    if (result.approx.rows() != a.rows() || result.approx.cols() != a.cols())
        throw std::invalid_argument("diagnostics: approximation shape disagrees with matrix");
    const std::size_t k = result.cols.size();
    if (result.z.rows() != k)
        throw std::invalid_argument("diagnostics: coefficient row count disagrees with cols");

    IdDiagnostics d;
    const double denom = frobenius_norm(a);
    const double dist = frobenius_distance(a, result.approx);
    d.relative_error = denom > 0.0 ? dist / denom : (dist > 0.0 ? INFINITY : 0.0);
    d.max_abs_z = max_abs(result.z);
    double dev = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t col = result.cols[j];
        if (col >= result.z.cols())
            throw std::invalid_argument("diagnostics: column index outside coefficient matrix");
        for (std::size_t i = 0; i < k; ++i) {
            const double want = i == j ? 1.0 : 0.0;
            dev = std::max(dev, std::fabs(result.z(i, col) - want));
        }
    }
    d.identity_deviation = dev;
    d.entry_bound_satisfied = d.max_abs_z <= 2.0 + 1e-12;
    return d;
}

} // namespace idkit
