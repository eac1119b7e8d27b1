#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace solab {

/// Small dense row-major matrix. Dimensions here never exceed a handful.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
    std::span<const double> data() const noexcept { return a_; }

    Matrix transpose() const;
    double max_abs() const;

    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator+(const Matrix& a, const Matrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

/// Lower-triangular L with A = L L^T. Throws NotPositiveDefinite when a pivot is <= pivot_tol.
Matrix cholesky(const Matrix& a, double pivot_tol = 1e-13);

/// Inverse of a lower-triangular matrix.
Matrix lower_triangular_inverse(const Matrix& l);

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    Matrix vectors;              // column k is the eigenvector of values[k]
};

/// Cyclic Jacobi rotations on a symmetric matrix. Converges when the off-diagonal
/// Frobenius norm falls below tol times the full norm. Throws ConvergenceError.
SymmetricEigen jacobi_eigen(const Matrix& a, double tol = 1e-13, int max_sweeps = 50);

/// Minimum-norm least-squares solution of A x = b. Directions whose singular value is
/// below rcond * max singular value are dropped.
std::vector<double> least_squares(const Matrix& a, std::span<const double> b, double rcond = 1e-10);

} // namespace solab
