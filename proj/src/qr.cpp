#include "idkit/qr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace idkit {

namespace {

// Householder reflector for x[0..len): on exit x[0] holds beta and
// x[1..len) the reflector tail (the leading 1 is implicit). Returns tau;
// tau == 0 means the column was already reduced.
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

// y -= tau * v * (vᵀ y) with v = [1, x[1..len)] aligned with y.
void apply_householder(const double* x, double tau, double* y, std::size_t len) {
    if (tau == 0.0) return;
    double w = y[0];
    for (std::size_t i = 1; i < len; ++i) w += x[i] * y[i];
    w *= tau;
    y[0] -= w;
    for (std::size_t i = 1; i < len; ++i) y[i] -= w * x[i];
}

} // namespace

PivotedQr qr_column_pivoted(const Matrix& a, std::size_t max_steps) {
    const std::size_t m = a.rows();
    const std::size_t n = a.cols();
    if (max_steps < 1 || max_steps > std::min(m, n))
        throw std::invalid_argument("qr_column_pivoted: max_steps must lie in [1, min(rows, cols)]");

    Matrix work = a;
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<double> taus(max_steps, 0.0);

    // Squared residual norms: live downdated value and the value at the
    // last full recompute, guarding the downdating recurrence against
    // cancellation.
    std::vector<double> live(n), anchor(n);
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        const double* col = work.col_data(j);
        for (std::size_t i = 0; i < m; ++i) s += col[i] * col[i];
        live[j] = anchor[j] = s;
    }

    const std::size_t s = max_steps;
    for (std::size_t step = 0; step < s; ++step) {
        double vmax = 0.0;
        for (std::size_t l = step; l < n; ++l) vmax = std::max(vmax, live[l]);
        std::size_t pivot = step;
        if (vmax > 0.0) {
            // Lowest index whose residual norm ties the max within 1e-14.
            const double threshold = (1.0 - 1e-14) * std::sqrt(vmax);
            for (std::size_t l = step; l < n; ++l) {
                if (std::sqrt(live[l]) >= threshold) {
                    pivot = l;
                    break;
                }
            }
        }
        if (pivot != step) {
            double* cs = work.col_data(step);
            double* cp = work.col_data(pivot);
            for (std::size_t i = 0; i < m; ++i) std::swap(cs[i], cp[i]);
            std::swap(perm[step], perm[pivot]);
            std::swap(live[step], live[pivot]);
            std::swap(anchor[step], anchor[pivot]);
        }

        double* pivot_col = work.col_data(step) + step;
        const std::size_t len = m - step;
        const double tau = make_householder(pivot_col, len);
        taus[step] = tau;

        for (std::size_t l = step + 1; l < n; ++l)
            apply_householder(pivot_col, tau, work.col_data(l) + step, len);

        for (std::size_t l = step + 1; l < n; ++l) {
            const double head = work(step, l);
            live[l] -= head * head;
            if (live[l] < 0.0) live[l] = 0.0;
            if (live[l] <= 1e-6 * anchor[l]) {
                double fresh = 0.0;
                const double* col = work.col_data(l);
                for (std::size_t i = step + 1; i < m; ++i) fresh += col[i] * col[i];
                live[l] = anchor[l] = fresh;
            }
        }
    }

    // Q = H_0 · H_1 ··· H_{s-1} applied to the leading s columns of I.
    Matrix q(m, s);
    for (std::size_t j = 0; j < s; ++j) q(j, j) = 1.0;
    for (std::size_t step = s; step-- > 0;) {
        const double* v = work.col_data(step) + step;
        const std::size_t len = m - step;
        for (std::size_t j = step; j < s; ++j)
            apply_householder(v, taus[step], q.col_data(j) + step, len);
    }

    Matrix r(s, n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t top = std::min(j + 1, s);
        for (std::size_t i = 0; i < top; ++i) r(i, j) = work(i, j);
    }

    return PivotedQr{std::move(q), std::move(r), std::move(perm), s};
}

} // namespace idkit
