#include "mico/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mico {

namespace {

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) throw NumericError("lattice: integer overflow");
    return r;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) throw NumericError("lattice: integer overflow");
    return r;
}

// Depth-first enumeration of the quadratic form (w - t)^T Q (w - t) with
// Q = R^T R upper triangular, coordinates processed last to first. Keeps the
// strict best; zig-zag order around each level's continuous center.
struct Enumerator {
    const Matrix& r;       // upper triangular Cholesky factor of Q
    const Vec& target;
    bool exclude_zero;
    std::size_t k;
    IntegerVector w, best;
    double best_val = std::numeric_limits<double>::infinity();

    Enumerator(const Matrix& rr, const Vec& t, bool ex)
        : r(rr), target(t), exclude_zero(ex), k(t.size()), w(t.size(), 0) {}

    void run(double initial_radius_sq) {
        best_val = initial_radius_sq;
        descend(k, 0.0);
    }

    void descend(std::size_t level, double partial) {
        if (level == 0) {
            if (exclude_zero && std::all_of(w.begin(), w.end(), [](auto v) { return v == 0; }))
                return;
            if (partial < best_val) {
                best_val = partial;
                best = w;
            }
            return;
        }
        const std::size_t i = level - 1;
        double center = target[i];
        for (std::size_t j = i + 1; j < k; ++j)
            center -= r(i, j) * (static_cast<double>(w[j]) - target[j]) / r(i, i);
        double budget = best_val - partial;
        if (budget < 0) return;
        double half = std::sqrt(budget) / r(i, i);
        auto lo = static_cast<std::int64_t>(std::ceil(center - half - 1e-9));
        auto hi = static_cast<std::int64_t>(std::floor(center + half + 1e-9));
        auto base = static_cast<std::int64_t>(std::llround(center));
        // Visit base, base+1, base-1, ... so the bound tightens fast.
        for (std::int64_t off = 0;; ++off) {
            bool any = false;
            for (int sgn : {+1, -1}) {
                if (off == 0 && sgn < 0) continue;
                std::int64_t v = base + sgn * off;
                if (v < lo || v > hi) continue;
                any = true;
                w[i] = v;
                double step = r(i, i) * (static_cast<double>(v) - center);
                double next = partial + step * step;
                if (next <= best_val + 1e-15) descend(i, next);
            }
            if (!any && off > 0) break;
        }
        w[i] = 0;
    }
};

// Upper-triangular R with Q = R^T R, for Q = A^{-1}.
Matrix inverse_cholesky_factor(const PDMatrix& a) {
    Matrix q = PDMatrix(a.inverse()).sqrt_lower().transpose();
    return q;
}

IntegerVector enumerate_closest(const PDMatrix& a, const Vec& target, bool exclude_zero,
                                std::size_t dim_cap) {
    const std::size_t k = a.order();
    if (k > dim_cap) throw CapabilityError("lattice: dimension exceeds enumeration cap");
    if (target.size() != k) throw InputError("lattice: target dimension mismatch");
    Matrix r = inverse_cholesky_factor(a);
    Enumerator e(r, target, exclude_zero);

    // Seed radius from an explicit candidate so the search space is finite.
    Matrix q = a.inverse();
    double seed = std::numeric_limits<double>::infinity();
    if (exclude_zero) {
        for (std::size_t i = 0; i < k; ++i) seed = std::min(seed, q(i, i));
    } else {
        Vec diff(k);
        for (std::size_t i = 0; i < k; ++i) diff[i] = std::llround(target[i]) - target[i];
        seed = dot(diff, q.apply(diff));
    }
    e.run(seed * (1.0 + 1e-12) + 1e-300);
    if (e.best.empty()) {
        // Seed candidate was already optimal.
        e.best.assign(k, 0);
        if (exclude_zero) {
            std::size_t arg = 0;
            for (std::size_t i = 1; i < k; ++i)
                if (q(i, i) < q(arg, arg)) arg = i;
            e.best[arg] = 1;
        } else {
            for (std::size_t i = 0; i < k; ++i) e.best[i] = std::llround(target[i]);
        }
    }
    return e.best;
}

}  // namespace

IntegerVector svp(const PDMatrix& a, std::size_t dim_cap) {
    return enumerate_closest(a, Vec(a.order(), 0.0), true, dim_cap);
}

IntegerVector cvp(const PDMatrix& a, const Vec& c, std::size_t dim_cap) {
    return enumerate_closest(a, c, false, dim_cap);
}

IntegerVector flatness_direction(const PDMatrix& aproj, std::size_t dim_cap) {
    Matrix tilde = aproj.inverse().scaled(0.25);
    return svp(PDMatrix(std::move(tilde)), dim_cap);
}

double ellipsoid_width(const PDMatrix& aproj, const IntegerVector& w) {
    if (w.size() != aproj.order()) throw InputError("ellipsoid_width: dimension mismatch");
    Vec wf(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) wf[i] = static_cast<double>(w[i]);
    return 2.0 * std::sqrt(dot(wf, aproj.matrix().apply(wf)));
}

std::optional<SliceBasis> kernel_slice_basis(const IntegerVector& w, std::int64_t m) {
    const std::size_t n = w.size();
    if (n == 0 || std::all_of(w.begin(), w.end(), [](auto v) { return v == 0; }))
        throw InputError("kernel_slice_basis: w must be nonzero");

    // Unimodular column reduction: v = w U with all mass driven into one entry.
    IntegerVector v = w;
    std::vector<IntegerVector> u(n, IntegerVector(n, 0));
    for (std::size_t i = 0; i < n; ++i) u[i][i] = 1;  // u[j] is column j

    auto col_axpy = [&](std::size_t dst, std::size_t src, std::int64_t q) {
        // col_dst -= q * col_src
        for (std::size_t i = 0; i < n; ++i)
            u[dst][i] = checked_add(u[dst][i], checked_mul(-q, u[src][i]));
        v[dst] = checked_add(v[dst], checked_mul(-q, v[src]));
    };

    for (;;) {
        std::size_t pivot = n;
        for (std::size_t j = 0; j < n; ++j)
            if (v[j] != 0 && (pivot == n || std::abs(v[j]) < std::abs(v[pivot]))) pivot = j;
        bool reduced = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == pivot || v[j] == 0) continue;
            col_axpy(j, pivot, v[j] / v[pivot]);
            if (v[j] != 0) reduced = false;
        }
        if (reduced) {
            if (pivot != 0) {
                std::swap(u[0], u[pivot]);
                std::swap(v[0], v[pivot]);
            }
            break;
        }
    }
    if (v[0] < 0) {
        for (std::size_t i = 0; i < n; ++i) u[0][i] = -u[0][i];
        v[0] = -v[0];
    }
    const std::int64_t g = v[0];
    if (m % g != 0) return std::nullopt;

    SliceBasis out;
    out.x0.resize(n);
    const std::int64_t scale = m / g;
    for (std::size_t i = 0; i < n; ++i) out.x0[i] = checked_mul(scale, u[0][i]);
    out.basis.assign(u.begin() + 1, u.end());
    return out;
}

}  // namespace mico
