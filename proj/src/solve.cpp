#include "idkit/solve.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "idkit/errors.hpp"

namespace idkit {

namespace {

void require_square_system(const Matrix& s, const Matrix& b, const char* op) {
    if (s.rows() != s.cols()) throw std::invalid_argument(std::string(op) + ": matrix not square");
    if (b.rows() != s.rows())
        throw std::invalid_argument(std::string(op) + ": right-hand side row count disagrees");
}

constexpr double kSingularFloor = 1e-300;

} // namespace

Matrix solve_triangular(const Matrix& t, const Matrix& b, Triangle side) {
    require_square_system(t, b, "solve_triangular");
    const std::size_t k = t.rows();
    const std::size_t nrhs = b.cols();
    for (std::size_t i = 0; i < k; ++i)
        if (std::fabs(t(i, i)) <= kSingularFloor)
            throw SingularMatrixError("solve_triangular: zero diagonal at index " +
                                      std::to_string(i));

    Matrix x = b;
    if (side == Triangle::lower) {
        for (std::size_t j = 0; j < nrhs; ++j) {
            double* xj = x.col_data(j);
            for (std::size_t i = 0; i < k; ++i) {
                double acc = xj[i];
                for (std::size_t l = 0; l < i; ++l) acc -= t(i, l) * xj[l];
                xj[i] = acc / t(i, i);
            }
        }
    } else {
        for (std::size_t j = 0; j < nrhs; ++j) {
            double* xj = x.col_data(j);
            for (std::size_t i = k; i-- > 0;) {
                double acc = xj[i];
                for (std::size_t l = i + 1; l < k; ++l) acc -= t(i, l) * xj[l];
                xj[i] = acc / t(i, i);
            }
        }
    }
    return x;
}

Matrix solve_posdef(const Matrix& s, const Matrix& b) {
    require_square_system(s, b, "solve_posdef");
    const std::size_t k = s.rows();

    // Lower Cholesky factor, reading only the lower triangle of s.
    Matrix l(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double acc = s(i, j);
            for (std::size_t p = 0; p < j; ++p) acc -= l(i, p) * l(j, p);
            if (i == j) {
                if (acc <= 0.0)
                    throw NotPositiveDefiniteError(
                        "solve_posdef: non-positive pivot at index " + std::to_string(i));
                l(i, i) = std::sqrt(acc);
            } else {
                l(i, j) = acc / l(j, j);
            }
        }
    }

    Matrix y = solve_triangular(l, b, Triangle::lower);
    return solve_triangular(transpose(l), y, Triangle::upper);
}

namespace {

// Bunch–Kaufman LDLᵀ with 1×1/2×2 diagonal pivoting, lower-triangle
// storage. Pivot blocks are recorded explicitly as (start, size,
// interchange row): the factorization interleaves interchanges with
// elimination, and the solve replays them in the same order.
struct PivotBlock {
    std::size_t start;
    std::size_t size; // 1 or 2
    std::size_t swap; // row interchanged with start+size-1 (== it when none)
};

struct LdltFactorization {
    Matrix a; // L strictly below the pivot blocks, D on the block diagonal
    std::vector<PivotBlock> blocks;
};

void swap_symmetric_lower(Matrix& a, std::size_t r, std::size_t p) {
    // Swap rows/columns r < p of a symmetric matrix stored in its lower
    // triangle.
    const std::size_t n = a.rows();
    for (std::size_t i = p + 1; i < n; ++i) std::swap(a(i, r), a(i, p));
    for (std::size_t j = r + 1; j < p; ++j) std::swap(a(j, r), a(p, j));
    std::swap(a(r, r), a(p, p));
}

LdltFactorization ldlt_bunch_kaufman(Matrix a) {
    const std::size_t n = a.rows();
    const double alpha = (1.0 + std::sqrt(17.0)) / 8.0;
    LdltFactorization f;
    f.blocks.reserve(n);

    std::size_t k = 0;
    while (k < n) {
        std::size_t kstep = 1;
        const double absakk = std::fabs(a(k, k));

        std::size_t imax = k;
        double colmax = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            const double v = std::fabs(a(i, k));
            if (v > colmax) {
                colmax = v;
                imax = i;
            }
        }

        if (std::max(absakk, colmax) == 0.0)
            throw SingularMatrixError("solve_symmetric_indefinite: zero pivot block at index " +
                                      std::to_string(k));

        std::size_t kp = k;
        if (absakk < alpha * colmax) {
            double rowmax = 0.0;
            for (std::size_t j = k; j < imax; ++j) rowmax = std::max(rowmax, std::fabs(a(imax, j)));
            for (std::size_t i = imax + 1; i < n; ++i)
                rowmax = std::max(rowmax, std::fabs(a(i, imax)));
            if (absakk >= alpha * colmax * (colmax / rowmax)) {
                kp = k;
            } else if (std::fabs(a(imax, imax)) >= alpha * rowmax) {
                kp = imax;
            } else {
                kp = imax;
                kstep = 2;
            }
        }

        const std::size_t kk = k + kstep - 1;
        if (kp != kk) {
            swap_symmetric_lower(a, kk, kp);
            if (kstep == 2) std::swap(a(kk, k), a(kp, k));
        }

        if (kstep == 1) {
            const double d = a(k, k);
            if (d == 0.0)
                throw SingularMatrixError(
                    "solve_symmetric_indefinite: singular 1x1 pivot at index " + std::to_string(k));
            const double inv = 1.0 / d;
            for (std::size_t j = k + 1; j < n; ++j) {
                const double w = a(j, k) * inv;
                for (std::size_t i = j; i < n; ++i) a(i, j) -= a(i, k) * w;
            }
            for (std::size_t i = k + 1; i < n; ++i) a(i, k) *= inv;
        } else {
            // 2×2 pivot D = [[a(k,k), a(k+1,k)], [a(k+1,k), a(k+1,k+1)]].
            const double d21 = a(k + 1, k);
            if (d21 == 0.0)
                throw SingularMatrixError(
                    "solve_symmetric_indefinite: singular 2x2 pivot at index " + std::to_string(k));
            const double d11 = a(k + 1, k + 1) / d21;
            const double d22 = a(k, k) / d21;
            const double det = d11 * d22 - 1.0;
            if (det == 0.0)
                throw SingularMatrixError(
                    "solve_symmetric_indefinite: singular 2x2 pivot at index " + std::to_string(k));
            const double t = 1.0 / det / d21;
            for (std::size_t j = k + 2; j < n; ++j) {
                const double wk = t * (d11 * a(j, k) - a(j, k + 1));
                const double wk1 = t * (d22 * a(j, k + 1) - a(j, k));
                for (std::size_t i = j; i < n; ++i)
                    a(i, j) -= a(i, k) * wk + a(i, k + 1) * wk1;
                a(j, k) = wk;
                a(j, k + 1) = wk1;
            }
        }

        f.blocks.push_back(PivotBlock{k, kstep, kp});
        k += kstep;
    }

    f.a = std::move(a);
    return f;
}

void swap_rows(Matrix& b, std::size_t r, std::size_t p) {
    if (r == p) return;
    for (std::size_t j = 0; j < b.cols(); ++j) std::swap(b(r, j), b(p, j));
}

Matrix ldlt_solve(const LdltFactorization& f, Matrix b) {
    const Matrix& a = f.a;
    const std::size_t n = a.rows();
    const std::size_t nrhs = b.cols();

    // L·(D·(Lᵀ·x)) = P-interleaved b: replay interchanges and eliminations
    // forward, solve the block diagonal, then undo in reverse.
    for (const PivotBlock& blk : f.blocks) {
        const std::size_t k = blk.start;
        swap_rows(b, k + blk.size - 1, blk.swap);
        for (std::size_t j = 0; j < nrhs; ++j) {
            double* bj = b.col_data(j);
            if (blk.size == 1) {
                const double bk = bj[k];
                for (std::size_t i = k + 1; i < n; ++i) bj[i] -= a(i, k) * bk;
            } else {
                const double bk = bj[k], bk1 = bj[k + 1];
                for (std::size_t i = k + 2; i < n; ++i)
                    bj[i] -= a(i, k) * bk + a(i, k + 1) * bk1;
            }
        }
    }

    for (const PivotBlock& blk : f.blocks) {
        const std::size_t k = blk.start;
        if (blk.size == 1) {
            const double d = a(k, k);
            for (std::size_t j = 0; j < nrhs; ++j) b(k, j) /= d;
        } else {
            const double akm1k = a(k + 1, k);
            const double akm1 = a(k, k) / akm1k;
            const double ak = a(k + 1, k + 1) / akm1k;
            const double denom = akm1 * ak - 1.0;
            for (std::size_t j = 0; j < nrhs; ++j) {
                const double bkm1 = b(k, j) / akm1k;
                const double bk = b(k + 1, j) / akm1k;
                b(k, j) = (ak * bkm1 - bk) / denom;
                b(k + 1, j) = (akm1 * bk - bkm1) / denom;
            }
        }
    }

    for (std::size_t bi = f.blocks.size(); bi-- > 0;) {
        const PivotBlock& blk = f.blocks[bi];
        const std::size_t k = blk.start;
        const std::size_t below = k + blk.size;
        for (std::size_t j = 0; j < nrhs; ++j) {
            double* bj = b.col_data(j);
            for (std::size_t c = k; c < below; ++c) {
                double acc = 0.0;
                for (std::size_t i = below; i < n; ++i) acc += a(i, c) * bj[i];
                bj[c] -= acc;
            }
        }
        swap_rows(b, k + blk.size - 1, blk.swap);
    }

    return b;
}

} // namespace

Matrix solve_symmetric_indefinite(const Matrix& s, const Matrix& b) {
    require_square_system(s, b, "solve_symmetric_indefinite");
    const std::size_t k = s.rows();

    // R_kᵀR_k formed in floating point is symmetric only to roundoff;
    // factor the symmetrized matrix.
    Matrix sym(k, k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < k; ++i) sym(i, j) = 0.5 * (s(i, j) + s(j, i));

    LdltFactorization f = ldlt_bunch_kaufman(std::move(sym));
    return ldlt_solve(f, b);
}

} // namespace idkit
