#pragma once

#include <optional>

#include "mico/types.hpp"

namespace mico {

/// Symmetric positive definite matrix with its Cholesky factor cached.
/// Construction symmetrizes the input (rejects asymmetry beyond 1e-9) and,
/// if factorization fails, retries once after adding 1e-12 * trace/k jitter
/// to the diagonal.
class PDMatrix {
public:
    explicit PDMatrix(Matrix m);
    static PDMatrix identity(std::size_t k) { return PDMatrix(Matrix::identity(k)); }
    /// Build A = L L^T from a lower-triangular factor with positive diagonal;
    /// skips re-factorization, so it stays exact for ill-conditioned shapes.
    static PDMatrix from_factor(Matrix l);

    std::size_t order() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }
    double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    /// Lower-triangular L with A = L L^T.
    const Matrix& sqrt_lower() const { return chol_.lower(); }
    double log_det() const { return chol_.log_det(); }
    Vec solve(const Vec& b) const { return chol_.solve(b); }  // A x = b
    Matrix inverse() const { return chol_.inverse(); }
    bool jittered() const { return jittered_; }

private:
    Matrix m_;
    Cholesky chol_;
    bool jittered_ = false;

    PDMatrix(Matrix m, Cholesky c, bool j) : m_(std::move(m)), chol_(std::move(c)), jittered_(j) {}
    static PDMatrix build(Matrix m);
};

/// { z : (z - c)^T A^{-1} (z - c) <= 1 }, the unit ball of ||.||_A about c.
struct Ellipsoid {
    Vec center;
    PDMatrix shape;

    Ellipsoid(Vec c, PDMatrix a);
    static Ellipsoid ball(const Vec& center, double radius);

    std::size_t dim() const { return center.size(); }
    /// (z - c)^T A^{-1} (z - c).
    double quad_form(const Vec& z) const;
    bool contains(const Vec& z, double tol = kTauFeas) const {
        return quad_form(z) <= 1.0 + tol;
    }
    /// c + L u for ||u|| <= 1; maps the unit ball onto the ellipsoid.
    Vec map_unit(const Vec& u) const;
};

/// log Lebesgue volume: log V_k + (1/2) log det A.
double log_volume(const Ellipsoid& e);
double log_unit_ball_volume(std::size_t k);

/// Shallow-cut update: smallest standard ellipsoid containing E intersect H
/// for a cut that misses the beta-scaled core of E. Returns nullopt when H
/// contains the beta-copy (NoCutNeeded). Enforces the volume law
/// d(log vol) <= -(1 - beta k)^2 / (5 k) + 1e-9 as a runtime check.
std::optional<Ellipsoid> shallow_cut_update(const Ellipsoid& e, const Halfspace& h, double beta);

/// Orthogonal projection onto the first n coordinates: center prefix and the
/// leading n x n principal submatrix of the shape.
Ellipsoid project_to_integer_coordinates(const Ellipsoid& e, std::size_t n);

/// argmin over y of ||(xhat, y) - c||_A; returns the full point (xhat, yhat).
Vec min_norm_over_fiber(const Ellipsoid& e, const Vec& xhat);

}  // namespace mico
