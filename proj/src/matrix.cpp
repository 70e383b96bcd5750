#include "idkit/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace idkit {

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r > 0 ? rows.begin()->size() : 0;
    Matrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        if (row.size() != c) throw std::invalid_argument("from_rows: ragged rows");
        std::size_t j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows())
        throw std::invalid_argument("matmul: inner dimensions disagree (" +
                                    std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) +
                                    ")");
    const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
    Matrix out(m, n);
    // Column-major saxpy ordering: both the accumulator column and the
    // streamed column of a are contiguous.
    for (std::size_t j = 0; j < n; ++j) {
        double* oj = out.col_data(j);
        const double* bj = b.col_data(j);
        for (std::size_t l = 0; l < k; ++l) {
            const double blj = bj[l];
            if (blj == 0.0) continue;
            const double* al = a.col_data(l);
            for (std::size_t i = 0; i < m; ++i) oj[i] += al[i] * blj;
        }
    }
    return out;
}

Matrix matmul_transpose_a(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw std::invalid_argument("matmul_transpose_a: row counts disagree");
    const std::size_t m = a.cols(), k = a.rows(), n = b.cols();
    Matrix out(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double* bj = b.col_data(j);
        double* oj = out.col_data(j);
        for (std::size_t i = 0; i < m; ++i) {
            const double* ai = a.col_data(i);
            double acc = 0.0;
            for (std::size_t l = 0; l < k; ++l) acc += ai[l] * bj[l];
            oj[i] = acc;
        }
    }
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out(j, i) = a(i, j);
    return out;
}

static void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(op) + ": shapes disagree");
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "operator+");
    Matrix out(a.rows(), a.cols());
    const std::size_t total = a.rows() * a.cols();
    for (std::size_t i = 0; i < total; ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "operator-");
    Matrix out(a.rows(), a.cols());
    const std::size_t total = a.rows() * a.cols();
    for (std::size_t i = 0; i < total; ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

double frobenius_norm(const Matrix& a) {
    double sum = 0.0;
    const std::size_t total = a.rows() * a.cols();
    for (std::size_t i = 0; i < total; ++i) sum += a.data()[i] * a.data()[i];
    return std::sqrt(sum);
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
    require_same_shape(a, b, "frobenius_distance");
    double sum = 0.0;
    const std::size_t total = a.rows() * a.cols();
    for (std::size_t i = 0; i < total; ++i) {
        const double d = a.data()[i] - b.data()[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

double max_abs(const Matrix& a) {
    double best = 0.0;
    const std::size_t total = a.rows() * a.cols();
    for (std::size_t i = 0; i < total; ++i) best = std::max(best, std::fabs(a.data()[i]));
    return best;
}

Matrix select_columns(const Matrix& a, std::span<const std::size_t> cols) {
    Matrix out(a.rows(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        if (cols[j] >= a.cols()) throw std::invalid_argument("select_columns: index out of range");
        const double* src = a.col_data(cols[j]);
        double* dst = out.col_data(j);
        for (std::size_t i = 0; i < a.rows(); ++i) dst[i] = src[i];
    }
    return out;
}

} // namespace idkit
