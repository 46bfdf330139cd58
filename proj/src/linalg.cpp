#include "mico/linalg.hpp"

#include <cmath>

namespace mico {

double dot(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const Vec& a) { return std::sqrt(dot(a, a)); }

double norm_inf(const Vec& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

Vec operator+(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec+: size mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec operator-(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec-: size mismatch");
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec operator*(double s, const Vec& a) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = s * a[i];
    return r;
}

Vec& operator+=(Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vec+=: size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    return a;
}

Matrix Matrix::identity(std::size_t k) {
    Matrix m(k, k);
    for (std::size_t i = 0; i < k; ++i) m(i, i) = 1.0;
    return m;
}

Vec Matrix::apply(const Vec& x) const {
    if (x.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
    Vec r(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r[i] += (*this)(i, j) * x[j];
    return r;
}

Vec Matrix::apply_transpose(const Vec& x) const {
    if (x.size() != rows_) throw std::invalid_argument("Matrix::apply_transpose: size mismatch");
    Vec r(cols_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r[j] += (*this)(i, j) * x[i];
    return r;
}

Matrix Matrix::multiply(const Matrix& other) const {
    if (cols_ != other.rows_) throw std::invalid_argument("Matrix::multiply: size mismatch");
    Matrix r(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            double v = (*this)(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j) r(i, j) += v * other(k, j);
        }
    return r;
}

Matrix Matrix::transpose() const {
    Matrix r(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(j, i) = (*this)(i, j);
    return r;
}

Matrix Matrix::scaled(double s) const {
    Matrix r = *this;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) r(i, j) *= s;
    return r;
}

Cholesky::Cholesky(const Matrix& a) {
    const std::size_t k = a.rows();
    if (a.cols() != k) throw std::invalid_argument("Cholesky: not square");
    l_ = Matrix(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a(i, j);
            for (std::size_t m = 0; m < j; ++m) s -= l_(i, m) * l_(j, m);
            if (i == j) {
                if (s <= 0.0) throw std::invalid_argument("Cholesky: non-positive pivot");
                l_(i, i) = std::sqrt(s);
            } else {
                l_(i, j) = s / l_(j, j);
            }
        }
    }
}

Cholesky Cholesky::from_lower(Matrix l) {
    const std::size_t k = l.rows();
    if (l.cols() != k) throw std::invalid_argument("Cholesky::from_lower: not square");
    for (std::size_t i = 0; i < k; ++i) {
        if (!(l(i, i) > 0.0))
            throw std::invalid_argument("Cholesky::from_lower: non-positive diagonal");
        for (std::size_t j = i + 1; j < k; ++j)
            if (l(i, j) != 0.0)
                throw std::invalid_argument("Cholesky::from_lower: not lower triangular");
    }
    Cholesky c;
    c.l_ = std::move(l);
    return c;
}

double Cholesky::log_det() const {
    double s = 0.0;
    for (std::size_t i = 0; i < l_.rows(); ++i) s += std::log(l_(i, i));
    return 2.0 * s;
}

Vec Cholesky::solve(const Vec& b) const {
    const std::size_t k = l_.rows();
    if (b.size() != k) throw std::invalid_argument("Cholesky::solve: size mismatch");
    Vec y(k), x(k);
    for (std::size_t i = 0; i < k; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= l_(i, j) * y[j];
        y[i] = s / l_(i, i);
    }
    for (std::size_t ii = k; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t j = ii + 1; j < k; ++j) s -= l_(j, ii) * x[j];
        x[ii] = s / l_(ii, ii);
    }
    return x;
}

Matrix Cholesky::inverse() const {
    const std::size_t k = l_.rows();
    Matrix inv(k, k);
    for (std::size_t col = 0; col < k; ++col) {
        Vec e(k, 0.0);
        e[col] = 1.0;
        Vec x = solve(e);
        for (std::size_t i = 0; i < k; ++i) inv(i, col) = x[i];
    }
    return inv;
}

Vec solve_linear(Matrix a, Vec b) {
    const std::size_t k = a.rows();
    if (a.cols() != k || b.size() != k) throw std::invalid_argument("solve_linear: size mismatch");
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        if (std::abs(a(piv, col)) < 1e-14) throw std::invalid_argument("solve_linear: singular matrix");
        if (piv != col) {
            for (std::size_t j = 0; j < k; ++j) std::swap(a(col, j), a(piv, j));
            std::swap(b[col], b[piv]);
        }
        for (std::size_t r = col + 1; r < k; ++r) {
            double f = a(r, col) / a(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < k; ++j) a(r, j) -= f * a(col, j);
            b[r] -= f * b[col];
        }
    }
    Vec x(k);
    for (std::size_t ii = k; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < k; ++j) s -= a(ii, j) * x[j];
        x[ii] = s / a(ii, ii);
    }
    return x;
}

}  // namespace mico
