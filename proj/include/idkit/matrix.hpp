#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace idkit {

/// Dense matrix of doubles, column-major storage, (row, col) addressing.
/// Values are immutable by convention once handed to the algorithms; every
/// operation in this library returns fresh matrices instead of mutating
/// its inputs.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    /// Row-by-row construction, for tests and small literals.
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    const double& operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    double* col_data(std::size_t j) { return data_.data() + j * rows_; }
    const double* col_data(std::size_t j) const { return data_.data() + j * rows_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    bool all_finite() const;

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// a·b. Throws std::invalid_argument on inner-dimension mismatch.
Matrix matmul(const Matrix& a, const Matrix& b);

/// aᵀ·b without materializing the transpose.
Matrix matmul_transpose_a(const Matrix& a, const Matrix& b);

Matrix transpose(const Matrix& a);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

/// sqrt of the sum of squared entries.
double frobenius_norm(const Matrix& a);

/// ‖a − b‖_F without materializing the difference.
double frobenius_distance(const Matrix& a, const Matrix& b);

/// Largest |entry|; 0 for an empty matrix.
double max_abs(const Matrix& a);

/// New matrix holding a[:, cols[0]], a[:, cols[1]], ... in the given order.
Matrix select_columns(const Matrix& a, std::span<const std::size_t> cols);

} // namespace idkit
