#include "mico/lp.hpp"

#include <cmath>
#include <limits>

namespace mico {
namespace {

constexpr double kPivotTol = 1e-9;

// Tableau with explicit objective row; columns [vars | rhs].
struct Tableau {
    std::size_t m, nv;
    std::vector<double> t;   // (m + 1) x (nv + 1), row m is the objective
    std::vector<std::size_t> basis;

    double& at(std::size_t i, std::size_t j) { return t[i * (nv + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return t[i * (nv + 1) + j]; }

    void pivot(std::size_t row, std::size_t col) {
        double p = at(row, col);
        for (std::size_t j = 0; j <= nv; ++j) at(row, j) /= p;
        for (std::size_t i = 0; i <= m; ++i) {
            if (i == row) continue;
            double f = at(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= nv; ++j) at(i, j) -= f * at(row, j);
        }
        basis[row] = col;
    }

    // Bland: entering = smallest index with reduced cost < -tol; leaving =
    // min ratio, ties by smallest basis variable index.
    // Returns false when optimal, throws nothing; unbounded flagged via out.
    enum class Step { Optimal, Pivoted, Unbounded };
    Step step() {
        std::size_t enter = nv;
        for (std::size_t j = 0; j < nv; ++j) {
            if (at(m, j) < -kPivotTol) { enter = j; break; }
        }
        if (enter == nv) return Step::Optimal;
        std::size_t leave = m;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            double a = at(i, enter);
            if (a > kPivotTol) {
                double ratio = at(i, nv) / a;
                if (ratio < best - 1e-12 ||
                    (ratio < best + 1e-12 && (leave == m || basis[i] < basis[leave]))) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave == m) return Step::Unbounded;
        pivot(leave, enter);
        return Step::Pivoted;
    }
};

}  // namespace

LpResult solve_lp(const LpProblem& p) {
    const std::size_t m = p.a.rows();
    const std::size_t n = p.a.cols();
    if (p.b.size() != m || p.c.size() != n) throw std::invalid_argument("solve_lp: size mismatch");

    // x = u - v with u, v >= 0; slack per row; artificial per negative-rhs row.
    const std::size_t n_struct = 2 * n + m;
    std::size_t n_art = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (p.b[i] < 0) ++n_art;

    Tableau tab;
    tab.m = m;
    tab.nv = n_struct + n_art;
    tab.t.assign((m + 1) * (tab.nv + 1), 0.0);
    tab.basis.assign(m, 0);

    std::size_t art = n_struct;
    for (std::size_t i = 0; i < m; ++i) {
        double sign = (p.b[i] < 0) ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            tab.at(i, j) = sign * p.a(i, j);
            tab.at(i, n + j) = -sign * p.a(i, j);
        }
        tab.at(i, 2 * n + i) = sign;  // slack
        tab.at(i, tab.nv) = sign * p.b[i];
        if (p.b[i] < 0) {
            tab.at(i, art) = 1.0;
            tab.basis[i] = art;
            ++art;
        } else {
            tab.basis[i] = 2 * n + i;
        }
    }

    LpResult res;
    if (n_art > 0) {
        // Phase 1: minimize sum of artificials.
        for (std::size_t j = n_struct; j < tab.nv; ++j) tab.at(m, j) = 1.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis[i] >= n_struct) {
                for (std::size_t j = 0; j <= tab.nv; ++j) tab.at(m, j) -= tab.at(i, j);
            }
        }
        while (tab.step() == Tableau::Step::Pivoted) {}
        if (tab.at(m, tab.nv) < -1e-7) {
            res.status = LpStatus::Infeasible;
            return res;
        }
        // Drive any lingering artificial out of the basis.
        for (std::size_t i = 0; i < m; ++i) {
            if (tab.basis[i] >= n_struct) {
                std::size_t piv = tab.nv;
                for (std::size_t j = 0; j < n_struct; ++j) {
                    if (std::abs(tab.at(i, j)) > kPivotTol) { piv = j; break; }
                }
                if (piv < tab.nv) tab.pivot(i, piv);
                // else: redundant row, harmless.
            }
        }
        // Forbid artificials from re-entering.
        for (std::size_t i = 0; i <= m; ++i)
            for (std::size_t j = n_struct; j < tab.nv; ++j) tab.at(i, j) = 0.0;
    }

    // Phase 2 objective row.
    for (std::size_t j = 0; j <= tab.nv; ++j) tab.at(m, j) = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        tab.at(m, j) = p.c[j];
        tab.at(m, n + j) = -p.c[j];
    }
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t bj = tab.basis[i];
        double cost = tab.at(m, bj);
        if (cost != 0.0)
            for (std::size_t j = 0; j <= tab.nv; ++j) tab.at(m, j) -= cost * tab.at(i, j);
    }

    for (;;) {
        auto s = tab.step();
        if (s == Tableau::Step::Optimal) break;
        if (s == Tableau::Step::Unbounded) {
            res.status = LpStatus::Unbounded;
            return res;
        }
    }

    Vec u(2 * n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basis[i] < 2 * n) u[tab.basis[i]] = tab.at(i, tab.nv);
    res.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) res.x[j] = u[j] - u[n + j];
    res.value = dot(p.c, res.x);
    res.status = LpStatus::Optimal;
    return res;
}

LpResult maximize_lp(const Matrix& a, const Vec& b, const Vec& c) {
    Vec neg = -1.0 * c;
    LpResult r = solve_lp({a, b, neg});
    r.value = -r.value;
    return r;
}

}  // namespace mico
