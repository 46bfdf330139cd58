#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace mico {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double norm2(const Vec& a);
double norm_inf(const Vec& a);
Vec operator+(const Vec& a, const Vec& b);
Vec operator-(const Vec& a, const Vec& b);
Vec operator*(double s, const Vec& a);
Vec& operator+=(Vec& a, const Vec& b);

/// Small dense row-major matrix. Everything in this project is desk scale
/// (order <= ~16), so no blocking or pivoting heroics.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t k);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Vec apply(const Vec& x) const;             // A x
    Vec apply_transpose(const Vec& x) const;   // A^T x
    Matrix multiply(const Matrix& other) const;
    Matrix transpose() const;
    Matrix scaled(double s) const;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

/// Cholesky factorization A = L L^T of a symmetric positive definite matrix.
/// Throws std::invalid_argument if a pivot is not strictly positive.
class Cholesky {
public:
    explicit Cholesky(const Matrix& a);

    /// Adopt a precomputed lower-triangular factor with positive diagonal.
    static Cholesky from_lower(Matrix l);

    const Matrix& lower() const { return l_; }
    double log_det() const;          // log det A
    Vec solve(const Vec& b) const;   // A x = b
    Matrix inverse() const;

private:
    Cholesky() = default;
    Matrix l_;
};

/// Solve a general square system by Gaussian elimination with partial
/// pivoting. Throws on (numerically) singular input.
Vec solve_linear(Matrix a, Vec b);

}  // namespace mico
