#include "mico/geometry.hpp"

#include <cmath>
#include <numbers>

namespace mico {

void ProblemParameters::validate() const {
    if (n < 0) throw InputError("ProblemParameters: n must be >= 0");
    if (d < 0) throw InputError("ProblemParameters: d must be >= 0");
    if (n + d < 1) throw InputError("ProblemParameters: n + d must be >= 1");
    if (!(R > 0)) throw InputError("ProblemParameters: R must be > 0");
    if (!(M >= 0)) throw InputError("ProblemParameters: M must be >= 0");
    if (d >= 1 && !(rho > 0 && rho <= 1)) throw InputError("ProblemParameters: rho must satisfy 0 < rho <= 1");
    if (!(eps >= 0)) throw InputError("ProblemParameters: eps must be >= 0");
    if (!(delta > 0)) throw InputError("ProblemParameters: delta must be > 0");
}

Halfspace::Halfspace(Vec a, double b) : normal(std::move(a)), offset(b) {
    if (norm2(normal) <= 0.0) throw InputError("Halfspace: normal must be nonzero");
}

Halfspace Halfspace::normalized() const {
    double s = norm2(normal);
    return Halfspace((1.0 / s) * normal, offset / s);
}

PDMatrix PDMatrix::build(Matrix m) {
    const std::size_t k = m.rows();
    if (m.cols() != k || k == 0) throw InputError("PDMatrix: not square");
    double max_asym = 0.0, max_abs = 0.0;
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            max_asym = std::max(max_asym, std::abs(m(i, j) - m(j, i)));
            max_abs = std::max(max_abs, std::abs(m(i, j)));
        }
    if (max_asym > 1e-9 * std::max(1.0, max_abs)) throw InputError("PDMatrix: not symmetric");
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            double v = 0.5 * (m(i, j) + m(j, i));
            m(i, j) = v;
            m(j, i) = v;
        }
    try {
        Cholesky c(m);
        return PDMatrix(std::move(m), std::move(c), false);
    } catch (const std::invalid_argument&) {
        double tr = 0.0;
        for (std::size_t i = 0; i < k; ++i) tr += m(i, i);
        double prev = 0.0;
        for (double scale : {1e-12, 1e-9, 1e-6}) {
            double jitter = scale * tr / static_cast<double>(k);
            for (std::size_t i = 0; i < k; ++i) m(i, i) += jitter - prev;
            prev = jitter;
            try {
                Cholesky c(m);
                return PDMatrix(std::move(m), std::move(c), true);
            } catch (const std::invalid_argument&) {
            }
        }
        Cholesky c(m);  // throws through if still not PD
        return PDMatrix(std::move(m), std::move(c), true);
    }
}

PDMatrix::PDMatrix(Matrix m) : PDMatrix(build(std::move(m))) {}

PDMatrix PDMatrix::from_factor(Matrix l) {
    Matrix m = l.multiply(l.transpose());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) m(j, i) = m(i, j);
    Cholesky c = Cholesky::from_lower(std::move(l));
    return PDMatrix(std::move(m), std::move(c), false);
}

Ellipsoid::Ellipsoid(Vec c, PDMatrix a) : center(std::move(c)), shape(std::move(a)) {
    if (center.size() != shape.order()) throw InputError("Ellipsoid: center/shape dimension mismatch");
}

Ellipsoid Ellipsoid::ball(const Vec& center, double radius) {
    if (!(radius > 0)) throw InputError("Ellipsoid::ball: radius must be > 0");
    Matrix a = Matrix::identity(center.size()).scaled(radius * radius);
    return Ellipsoid(center, PDMatrix(std::move(a)));
}

double Ellipsoid::quad_form(const Vec& z) const {
    Vec r = z - center;
    return dot(r, shape.solve(r));
}

Vec Ellipsoid::map_unit(const Vec& u) const {
    return center + shape.sqrt_lower().apply(u);
}

double log_unit_ball_volume(std::size_t k) {
    double kk = static_cast<double>(k);
    return 0.5 * kk * std::log(std::numbers::pi) - std::lgamma(0.5 * kk + 1.0);
}

double log_volume(const Ellipsoid& e) {
    return log_unit_ball_volume(e.dim()) + 0.5 * e.shape.log_det();
}

std::optional<Ellipsoid> shallow_cut_update(const Ellipsoid& e, const Halfspace& h, double beta) {
    const std::size_t k = e.dim();
    const double kk = static_cast<double>(k);
    if (!(beta >= 0.0 && beta < 1.0 / kk)) throw InputError("shallow_cut_update: beta out of [0, 1/k)");
    if (h.normal.size() != k) throw InputError("shallow_cut_update: dimension mismatch");

    const Vec& a = h.normal;
    // a^T A a computed through the factor as ||L^T a||^2: a sum of squares,
    // immune to the cancellation the assembled matrix suffers for needles.
    const Matrix& l = e.shape.sqrt_lower();
    Vec v = l.apply_transpose(a);  // L^T a
    double q = dot(v, v);          // a^T A a
    if (q <= 0.0) throw NumericError("shallow_cut_update: degenerate cut normal");
    double root = std::sqrt(q);
    Vec aa = l.apply(v);  // A a
    // Signed cut depth: 0 = central, >0 cuts off the center, <0 shallow.
    double gamma = (dot(a, e.center) - h.offset) / root;
    // Strict test so a central cut (gamma = 0, beta = 0) still updates.
    if (gamma < -beta) return std::nullopt;  // H contains the beta-copy of E
    // Clamping keeps the update nonsingular; a smaller gamma only enlarges
    // the replacement ellipsoid, so containment of E cap H is preserved.
    if (gamma > 1.0 - 1e-8) gamma = 1.0 - 1e-8;

    double old_lv = log_volume(e);
    Ellipsoid out = [&]() {
        if (k == 1) {
            // Interval case: intersect exactly.
            double r = std::sqrt(e.shape(0, 0));
            double lo = e.center[0] - r, hi = e.center[0] + r;
            double bnd = h.offset / a[0];
            if (a[0] > 0) hi = std::min(hi, bnd);
            else lo = std::max(lo, bnd);
            // Floor keeps half * half positive in double precision.
            double half = std::max(0.5 * (hi - lo), 1e-150);
            Matrix m(1, 1);
            m(0, 0) = half * half;
            return Ellipsoid({0.5 * (lo + hi)}, PDMatrix(std::move(m)));
        }
        double tau = (1.0 + kk * gamma) / (kk + 1.0);
        double delta = kk * kk * (1.0 - gamma * gamma) / (kk * kk - 1.0);
        double sigma = 2.0 * (1.0 + kk * gamma) / ((kk + 1.0) * (1.0 + gamma));
        Vec c2 = e.center - (tau / root) * aa;
        // Update in the factor: A' = delta L (I - sigma u u^T) L^T with
        // u = L^T a / ||L^T a||. The inner matrix is well conditioned
        // (eigenvalues 1 and 1 - sigma > 0), so the product factor stays a
        // valid Cholesky factor even when A is nearly singular.
        Vec u = (1.0 / root) * v;
        Matrix b(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                b(i, j) = (i == j ? 1.0 : 0.0) - sigma * u[i] * u[j];
        Matrix lp = l.multiply(Cholesky(b).lower()).scaled(std::sqrt(delta));
        return Ellipsoid(std::move(c2), PDMatrix::from_factor(std::move(lp)));
    }();

    double decrease = old_lv - log_volume(out);
    double required = (1.0 - beta * kk) * (1.0 - beta * kk) / (5.0 * kk);
    if (decrease < required - 1e-9)
        throw NumericError("shallow_cut_update: volume law violated");
    return out;
}

Ellipsoid project_to_integer_coordinates(const Ellipsoid& e, std::size_t n) {
    const std::size_t k = e.dim();
    if (n < 1 || n > k) throw InputError("project_to_integer_coordinates: n out of range");
    Vec c(e.center.begin(), e.center.begin() + n);
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = e.shape(i, j);
    return Ellipsoid(std::move(c), PDMatrix(std::move(m)));
}

Vec min_norm_over_fiber(const Ellipsoid& e, const Vec& xhat) {
    const std::size_t k = e.dim();
    const std::size_t n = xhat.size();
    if (n > k) throw InputError("min_norm_over_fiber: xhat longer than ambient dimension");
    const std::size_t d = k - n;
    Vec z(k);
    for (std::size_t i = 0; i < n; ++i) z[i] = xhat[i];
    if (d == 0) return z;
    // With M = A^{-1} partitioned by (x, y): stationarity gives
    // y = c_y - Myy^{-1} Myx (xhat - c_x).
    Matrix minv = e.shape.inverse();
    Matrix myy(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) myy(i, j) = minv(n + i, n + j);
    Vec rhs(d, 0.0);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < n; ++j) rhs[i] += minv(n + i, j) * (xhat[j] - e.center[j]);
    Vec corr = Cholesky(myy).solve(rhs);
    for (std::size_t i = 0; i < d; ++i) z[n + i] = e.center[n + i] - corr[i];
    return z;
}

}  // namespace mico
