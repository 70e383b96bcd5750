#include "idkit/svd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "idkit/errors.hpp"

namespace idkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kDeflationTol = 1e-15;

double make_householder(double* x, std::size_t len) {
    if (len <= 1) return 0.0;
    double tail = 0.0;
    for (std::size_t i = 1; i < len; ++i) tail += x[i] * x[i];
    if (tail == 0.0) return 0.0;
    const double alpha = x[0];
    const double beta = -std::copysign(std::sqrt(alpha * alpha + tail), alpha);
    const double tau = (beta - alpha) / beta;
    const double scale = 1.0 / (alpha - beta);
    for (std::size_t i = 1; i < len; ++i) x[i] *= scale;
    x[0] = beta;
    return tau;
}

void apply_householder(const double* x, double tau, double* y, std::size_t len) {
    if (tau == 0.0) return;
    double w = y[0];
    for (std::size_t i = 1; i < len; ++i) w += x[i] * y[i];
    w *= tau;
    y[0] -= w;
    for (std::size_t i = 1; i < len; ++i) y[i] -= w * x[i];
}

// Columns (j, j+1) of x are replaced by (c·colj + s·colj1, −s·colj + c·colj1).
// The same routine accumulates both left rotations (into u) and right
// rotations (into v): B ← B·M pairs with V ← V·M, and B ← Mᵀ·B with U ← U·M.
void apply_rotation(Matrix& x, std::size_t j, double c, double s) {
    double* a = x.col_data(j);
    double* b = x.col_data(j + 1);
    const std::size_t m = x.rows();
    for (std::size_t i = 0; i < m; ++i) {
        const double ai = a[i], bi = b[i];
        a[i] = c * ai + s * bi;
        b[i] = c * bi - s * ai;
    }
}

// (c, s, r) with c·f + s·g = r and c·g − s·f = 0.
struct Givens {
    double c, s, r;
};

Givens make_givens(double f, double g) {
    if (g == 0.0) return {1.0, 0.0, f};
    if (f == 0.0) return {0.0, 1.0, g};
    const double r = std::copysign(std::hypot(f, g), f);
    return {f / r, g / r, r};
}

// Shared state of the bidiagonal QR iteration: B is held as diagonal d and
// superdiagonal e, with A = U·B·Vᵀ maintained throughout.
struct BidiagonalQr {
    std::vector<double>& d;
    std::vector<double>& e;
    Matrix& u;
    Matrix& v;

    // Wilkinson shift from the trailing 2×2 of BᵀB for the block [p, q].
    double shift(std::size_t p, std::size_t q) const {
        const double dq1 = d[q - 1], dq = d[q], eq1 = e[q - 1];
        const double t11 = dq1 * dq1 + (q - 1 > p ? e[q - 2] * e[q - 2] : 0.0);
        const double t22 = dq * dq + eq1 * eq1;
        const double t12 = dq1 * eq1;
        const double delta = 0.5 * (t11 - t22);
        if (delta == 0.0 && t12 == 0.0) return t22;
        const double denom = delta + std::copysign(std::hypot(delta, t12), delta == 0.0 ? 1.0 : delta);
        return t22 - (t12 * t12) / denom;
    }

    // One implicit-shift QR step on the block [p, q], chasing the bulge down
    // the bidiagonal while accumulating the rotations.
    void qr_step(std::size_t p, std::size_t q) {
        const double mu = shift(p, q);
        double y = d[p] * d[p] - mu;
        double z = d[p] * e[p];
        for (std::size_t k = p; k < q; ++k) {
            Givens g = make_givens(y, z);
            if (k > p) e[k - 1] = g.r;
            // Right rotation on columns (k, k+1).
            const double dk = d[k], ek = e[k], dk1 = d[k + 1];
            d[k] = g.c * dk + g.s * ek;
            e[k] = g.c * ek - g.s * dk;
            double bulge = g.s * dk1;
            d[k + 1] = g.c * dk1;
            apply_rotation(v, k, g.c, g.s);
            // Left rotation on rows (k, k+1) kills the (k+1, k) bulge.
            g = make_givens(d[k], bulge);
            d[k] = g.r;
            const double ek2 = e[k], dk2 = d[k + 1];
            e[k] = g.c * ek2 + g.s * dk2;
            d[k + 1] = g.c * dk2 - g.s * ek2;
            if (k + 1 < q) {
                bulge = g.s * e[k + 1];
                e[k + 1] *= g.c;
                y = e[k];
                z = bulge;
            }
            apply_rotation(u, k, g.c, g.s);
        }
    }

    // d[i] vanished: chase e[i] out along row i with left rotations so the
    // block splits at i.
    void clear_row(std::size_t i, std::size_t q) {
        double bulge = e[i];
        e[i] = 0.0;
        for (std::size_t j = i + 1; j <= q; ++j) {
            // Rotate rows (j, i) to kill the (i, j) entry against d[j].
            const Givens g = make_givens(d[j], bulge);
            d[j] = g.r;
            apply_rotation_pair(j, i, g.c, g.s);
            if (j < q) {
                bulge = -g.s * e[j];
                e[j] *= g.c;
            }
        }
    }

    // d[q] vanished: chase e[q-1] up column q with right rotations.
    void clear_column(std::size_t p, std::size_t q) {
        double bulge = e[q - 1];
        e[q - 1] = 0.0;
        for (std::size_t i = q; i-- > p;) {
            const Givens g = make_givens(d[i], bulge);
            d[i] = g.r;
            rotate_pair(v, i, q, g.c, g.s);
            if (i > p) {
                bulge = -g.s * e[i - 1];
                e[i - 1] *= g.c;
            }
        }
    }

private:
    // Non-adjacent column-pair rotation: (cola, colb) ← (c·cola + s·colb,
    // −s·cola + c·colb).
    static void rotate_pair(Matrix& x, std::size_t a, std::size_t b, double c, double s) {
        double* pa = x.col_data(a);
        double* pb = x.col_data(b);
        const std::size_t m = x.rows();
        for (std::size_t i = 0; i < m; ++i) {
            const double ai = pa[i], bi = pb[i];
            pa[i] = c * ai + s * bi;
            pb[i] = c * bi - s * ai;
        }
    }

    void apply_rotation_pair(std::size_t a, std::size_t b, double c, double s) {
        rotate_pair(u, a, b, c, s);
    }
};

SvdResult svd_tall(const Matrix& a) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();

    Matrix work = a;
    std::vector<double> tau_col(n, 0.0);
    std::vector<double> tau_row(n, 0.0);

    // Householder bidiagonalization A = Q·B·Pᵀ: column reflectors from the
    // left, row reflectors (for columns j+2..n) from the right.
    for (std::size_t j = 0; j < n; ++j) {
        double* col = work.col_data(j) + j;
        tau_col[j] = make_householder(col, m - j);
        for (std::size_t l = j + 1; l < n; ++l)
            apply_householder(col, tau_col[j], work.col_data(l) + j, m - j);

        if (j + 2 < n) {
            const std::size_t len = n - j - 1;
            std::vector<double> row(len);
            for (std::size_t l = 0; l < len; ++l) row[l] = work(j, j + 1 + l);
            tau_row[j] = make_householder(row.data(), len);
            for (std::size_t l = 0; l < len; ++l) work(j, j + 1 + l) = row[l];
            if (tau_row[j] != 0.0) {
                // Apply (I − tau·v·vᵀ) from the right to rows j+1..m.
                std::vector<double> acc(m - j - 1, 0.0);
                for (std::size_t l = 0; l < len; ++l) {
                    const double vl = (l == 0) ? 1.0 : row[l];
                    const double* c = work.col_data(j + 1 + l) + j + 1;
                    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += vl * c[i];
                }
                for (std::size_t l = 0; l < len; ++l) {
                    const double f = tau_row[j] * ((l == 0) ? 1.0 : row[l]);
                    double* c = work.col_data(j + 1 + l) + j + 1;
                    for (std::size_t i = 0; i < acc.size(); ++i) c[i] -= f * acc[i];
                }
            }
        }
    }

    std::vector<double> d(n, 0.0), e(n > 0 ? n - 1 : 0, 0.0);
    for (std::size_t j = 0; j < n; ++j) d[j] = work(j, j);
    for (std::size_t j = 0; j + 1 < n; ++j) e[j] = work(j, j + 1);

    // Accumulate U = Q·I(m×n) from the column reflectors, in reverse.
    Matrix u(m, n);
    for (std::size_t j = 0; j < n; ++j) u(j, j) = 1.0;
    for (std::size_t step = n; step-- > 0;) {
        const double* v = work.col_data(step) + step;
        for (std::size_t j = step; j < n; ++j)
            apply_householder(v, tau_col[step], u.col_data(j) + step, m - step);
    }

    // Accumulate V = P·I(n×n) from the row reflectors, in reverse. The
    // reflector for step j lives in row j, columns j+1..n of work.
    Matrix v(n, n);
    for (std::size_t j = 0; j < n; ++j) v(j, j) = 1.0;
    if (n > 2) {
        std::vector<double> refl(n);
        for (std::size_t step = n - 2; step-- > 0;) {
            if (tau_row[step] == 0.0) continue;
            const std::size_t len = n - step - 1;
            for (std::size_t l = 0; l < len; ++l) refl[l] = work(step, step + 1 + l);
            for (std::size_t j = step + 1; j < n; ++j)
                apply_householder(refl.data(), tau_row[step], v.col_data(j) + step + 1, len);
        }
    }

    // Implicit-shift QR on the bidiagonal.
    BidiagonalQr iter{d, e, u, v};
    if (n > 1) {
        const std::size_t max_steps = 120 * n;
        std::size_t steps = 0;
        std::size_t q = n - 1;
        while (q > 0) {
            double bnorm = 0.0;
            for (std::size_t i = 0; i <= q; ++i) bnorm = std::max(bnorm, std::fabs(d[i]));
            for (std::size_t i = 0; i < q; ++i) bnorm = std::max(bnorm, std::fabs(e[i]));

            for (std::size_t i = 0; i < q; ++i)
                if (std::fabs(e[i]) <= kDeflationTol * (std::fabs(d[i]) + std::fabs(d[i + 1])))
                    e[i] = 0.0;
            if (e[q - 1] == 0.0) {
                --q;
                continue;
            }
            std::size_t p = q - 1;
            while (p > 0 && e[p - 1] != 0.0) --p;

            // A negligible diagonal inside the block forces a split before
            // the shifted step can run.
            bool split = false;
            for (std::size_t i = p; i <= q && !split; ++i) {
                if (std::fabs(d[i]) <= kEps * bnorm) {
                    d[i] = 0.0;
                    if (i == q)
                        iter.clear_column(p, q);
                    else
                        iter.clear_row(i, q);
                    split = true;
                }
            }
            if (split) continue;

            if (++steps > max_steps)
                throw ConvergenceError("svd: bidiagonal QR exceeded its iteration budget");
            iter.qr_step(p, q);
        }
    }

    // Signs, then a descending sort carried through U and V columns.
    for (std::size_t i = 0; i < n; ++i) {
        if (d[i] < 0.0) {
            d[i] = -d[i];
            double* vc = v.col_data(i);
            for (std::size_t r = 0; r < n; ++r) vc[r] = -vc[r];
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return d[i] > d[j]; });

    SvdResult out;
    out.singular_values.resize(n);
    out.u = Matrix(m, n);
    Matrix vsorted(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.singular_values[j] = d[order[j]];
        const double* us = u.col_data(order[j]);
        double* ud = out.u.col_data(j);
        for (std::size_t i = 0; i < m; ++i) ud[i] = us[i];
        const double* vs = v.col_data(order[j]);
        double* vd = vsorted.col_data(j);
        for (std::size_t i = 0; i < n; ++i) vd[i] = vs[i];
    }
    out.vt = transpose(vsorted);
    return out;
}

} // namespace

SvdResult svd(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) throw std::invalid_argument("svd: empty matrix");
    if (a.rows() >= a.cols()) return svd_tall(a);
    SvdResult t = svd_tall(transpose(a));
    SvdResult out;
    out.u = transpose(t.vt);
    out.singular_values = std::move(t.singular_values);
    out.vt = transpose(t.u);
    return out;
}

double truncated_svd_error(const Matrix& a, std::size_t k) {
    if (k < 1 || k > std::min(a.rows(), a.cols()))
        throw std::invalid_argument("truncated_svd_error: k out of range");
    const SvdResult s = svd(a);
    double tail = 0.0;
    for (std::size_t i = k; i < s.singular_values.size(); ++i)
        tail += s.singular_values[i] * s.singular_values[i];
    const double denom = frobenius_norm(a);
    if (denom == 0.0) return 0.0;
    return std::sqrt(tail) / denom;
}

} // namespace idkit
