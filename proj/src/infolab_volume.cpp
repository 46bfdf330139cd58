#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "mico/infolab.hpp"
#include "mico/lp.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mico {

namespace {

constexpr int kDiskEdges = 128;

using Pt2 = std::array<double, 2>;

/// Clip a convex polygon against { p : a1 x + a2 y <= b } (Sutherland-Hodgman).
std::vector<Pt2> clip_halfplane(const std::vector<Pt2>& poly, double a1, double a2, double b) {
    std::vector<Pt2> out;
    const std::size_t m = poly.size();
    for (std::size_t i = 0; i < m; ++i) {
        const Pt2& p = poly[i];
        const Pt2& q = poly[(i + 1) % m];
        double fp = a1 * p[0] + a2 * p[1] - b;
        double fq = a1 * q[0] + a2 * q[1] - b;
        if (fp <= 0) out.push_back(p);
        if ((fp < 0 && fq > 0) || (fp > 0 && fq < 0)) {
            double t = fp / (fp - fq);
            out.push_back({p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])});
        }
    }
    return out;
}

double polygon_area(const std::vector<Pt2>& poly) {
    if (poly.size() < 3) return 0.0;
    double s = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Pt2& p = poly[i];
        const Pt2& q = poly[(i + 1) % poly.size()];
        s += p[0] * q[1] - q[0] * p[1];
    }
    return 0.5 * std::abs(s);
}

/// One linear constraint on the continuous block for a fixed integer part:
/// <ay, y> <= rhs. infeasible flags a fiber emptied by the integer part.
struct FiberRow {
    Vec ay;
    double rhs = 0.0;
};

struct FiberSystem {
    std::vector<FiberRow> rows;
    bool infeasible = false;

    void add(Vec ay, double rhs) { rows.push_back({std::move(ay), rhs}); }
};

void collect_fiber_rows(const ConvexBodySpec& body, const Vec& x, int n, int d, FiberSystem& sys) {
    std::visit(
        [&](const auto& b) {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, BoxBody>) {
                for (int i = 0; i < n; ++i)
                    if (x[i] < b.lower[i] - 1e-9 || x[i] > b.upper[i] + 1e-9) sys.infeasible = true;
                for (int j = 0; j < d; ++j) {
                    Vec e(d, 0.0);
                    e[j] = 1.0;
                    sys.add(e, b.upper[n + j]);
                    e[j] = -1.0;
                    sys.add(std::move(e), -b.lower[n + j]);
                }
            } else if constexpr (std::is_same_v<T, PolyhedronBody>) {
                for (const Halfspace& h : b.rows) {
                    Vec ay(h.normal.begin() + n, h.normal.end());
                    double shift = 0.0;
                    for (int i = 0; i < n; ++i) shift += h.normal[i] * x[i];
                    if (norm2(ay) < 1e-12) {
                        if (shift > h.offset + 1e-9) sys.infeasible = true;
                        continue;
                    }
                    sys.add(std::move(ay), h.offset - shift);
                }
            } else if constexpr (std::is_same_v<T, BallBody>) {
                if (b.norm == Norm::Sup) {
                    for (int i = 0; i < n; ++i)
                        if (std::abs(x[i] - b.center[i]) > b.radius + 1e-9) sys.infeasible = true;
                    for (int j = 0; j < d; ++j) {
                        Vec e(d, 0.0);
                        e[j] = 1.0;
                        sys.add(e, b.center[n + j] + b.radius);
                        e[j] = -1.0;
                        sys.add(std::move(e), -(b.center[n + j] - b.radius));
                    }
                    return;
                }
                double sq = b.radius * b.radius;
                for (int i = 0; i < n; ++i) sq -= (x[i] - b.center[i]) * (x[i] - b.center[i]);
                if (sq < 0) {
                    sys.infeasible = true;
                    return;
                }
                double r = std::sqrt(sq);
                if (d == 1) {
                    sys.add({1.0}, b.center[n] + r);
                    sys.add({-1.0}, -(b.center[n] - r));
                } else if (d == 2) {
                    // Fiber disk as the intersection of tangent halfplanes of
                    // an inscribed regular polygon.
                    double cy1 = b.center[n], cy2 = b.center[n + 1];
                    for (int e = 0; e < kDiskEdges; ++e) {
                        double ang = (2.0 * std::numbers::pi * (e + 0.5)) / kDiskEdges;
                        double a1 = std::cos(ang), a2 = std::sin(ang);
                        double edge_r = r * std::cos(std::numbers::pi / kDiskEdges);
                        sys.add({a1, a2}, a1 * cy1 + a2 * cy2 + edge_r);
                    }
                }
            } else if constexpr (std::is_same_v<T, IntersectionBody>) {
                for (const ConvexBodySpec& part : b.parts)
                    collect_fiber_rows(part, x, n, d, sys);
            } else {
                throw CapabilityError("mixed_integer_volume: unsupported body kind");
            }
        },
        body.v);
}

/// LP chord of a hull fiber: extremes of y over convex combinations of the
/// hull points whose integer part equals x. Only d = 1 standalone hulls.
double hull_fiber_chord(const HullBody& b, const Vec& x, int n) {
    const std::size_t m = b.points.size();
    // Variables: weights w. Constraints: w >= 0, sum w = 1, sum w p_x = x.
    std::vector<Vec> lhs;
    Vec rhs;
    auto eq = [&](const Vec& row, double r) {
        lhs.push_back(row);
        rhs.push_back(r);
        Vec neg = -1.0 * row;
        lhs.push_back(std::move(neg));
        rhs.push_back(-r);
    };
    Vec ones(m, 1.0);
    eq(ones, 1.0);
    for (int i = 0; i < n; ++i) {
        Vec row(m);
        for (std::size_t j = 0; j < m; ++j) row[j] = b.points[j][i];
        eq(row, x[i]);
    }
    for (std::size_t j = 0; j < m; ++j) {
        Vec row(m, 0.0);
        row[j] = -1.0;
        lhs.push_back(std::move(row));
        rhs.push_back(0.0);
    }
    Matrix a(lhs.size(), m);
    for (std::size_t i = 0; i < lhs.size(); ++i)
        for (std::size_t j = 0; j < m; ++j) a(i, j) = lhs[i][j];
    Vec obj(m);
    for (std::size_t j = 0; j < m; ++j) obj[j] = b.points[j][n];
    LpResult hi = maximize_lp(a, rhs, obj);
    if (hi.status != LpStatus::Optimal) return 0.0;  // fiber misses the hull
    LpResult lo = maximize_lp(a, rhs, -1.0 * obj);
    if (lo.status != LpStatus::Optimal) return 0.0;
    return std::max(0.0, hi.value + lo.value);
}

double fiber_measure(const ConvexBodySpec& body, const Vec& x, int n, int d, const Vec& ylo,
                     const Vec& yhi) {
    if (d == 0) return body_contains(body, x, 1e-9) ? 1.0 : 0.0;
    if (const auto* hull = std::get_if<HullBody>(&body.v)) {
        if (d != 1) throw CapabilityError("mixed_integer_volume: hull bodies need d = 1");
        return hull_fiber_chord(*hull, x, n);
    }
    FiberSystem sys;
    collect_fiber_rows(body, x, n, d, sys);
    if (sys.infeasible) return 0.0;
    if (d == 1) {
        double lo = ylo[0] - 1.0, hi = yhi[0] + 1.0;
        for (const FiberRow& r : sys.rows) {
            if (r.ay[0] > 0)
                hi = std::min(hi, r.rhs / r.ay[0]);
            else if (r.ay[0] < 0)
                lo = std::max(lo, r.rhs / r.ay[0]);
            else if (r.rhs < -1e-9)
                return 0.0;
        }
        return std::max(0.0, hi - lo);
    }
    if (d == 2) {
        std::vector<Pt2> poly = {{ylo[0] - 1.0, ylo[1] - 1.0},
                                 {yhi[0] + 1.0, ylo[1] - 1.0},
                                 {yhi[0] + 1.0, yhi[1] + 1.0},
                                 {ylo[0] - 1.0, yhi[1] + 1.0}};
        for (const FiberRow& r : sys.rows) {
            if (norm2(r.ay) < 1e-12) {
                if (r.rhs < -1e-9) return 0.0;
                continue;
            }
            poly = clip_halfplane(poly, r.ay[0], r.ay[1], r.rhs);
            if (poly.empty()) return 0.0;
        }
        return polygon_area(poly);
    }
    throw CapabilityError("mixed_integer_volume: d > 2 not supported");
}

struct FiberGrid {
    std::vector<Vec> xs;  // integer parts, lexicographic
    Vec ylo, yhi;
};

FiberGrid fiber_grid(const ConvexBodySpec& body, int n, int /*d*/) {
    auto [lo, hi] = bounding_box(body);
    for (double v : lo)
        if (!std::isfinite(v) || std::abs(v) > 1e8)
            throw InputError("mixed_integer_volume: body is unbounded");
    for (double v : hi)
        if (!std::isfinite(v) || std::abs(v) > 1e8)
            throw InputError("mixed_integer_volume: body is unbounded");
    FiberGrid g;
    g.ylo.assign(lo.begin() + n, lo.end());
    g.yhi.assign(hi.begin() + n, hi.end());
    std::vector<long> cur(n), lo_i(n), hi_i(n);
    for (int i = 0; i < n; ++i) {
        lo_i[i] = static_cast<long>(std::ceil(lo[i] - 1e-9));
        hi_i[i] = static_cast<long>(std::floor(hi[i] + 1e-9));
        if (lo_i[i] > hi_i[i]) return g;
        cur[i] = lo_i[i];
    }
    if (n == 0) {
        g.xs.push_back({});
        return g;
    }
    for (;;) {
        Vec x(n);
        for (int i = 0; i < n; ++i) x[i] = static_cast<double>(cur[i]);
        g.xs.push_back(std::move(x));
        int i = n - 1;
        while (i >= 0 && cur[i] == hi_i[i]) {
            cur[i] = lo_i[i];
            --i;
        }
        if (i < 0) break;
        cur[i]++;
    }
    return g;
}

double grid_volume(const ConvexBodySpec& body, const FiberGrid& g, int n, int d) {
    double total = 0.0;
    for (const Vec& x : g.xs) total += fiber_measure(body, x, n, d, g.ylo, g.yhi);
    return total;
}

double volume_impl(const ConvexBodySpec& body, int n, int d, bool parallel) {
    FiberGrid g = fiber_grid(body, n, d);
    const long m = static_cast<long>(g.xs.size());
    std::vector<double> vols(g.xs.size(), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && m > 8)
#endif
    for (long i = 0; i < m; ++i)
        vols[static_cast<std::size_t>(i)] = fiber_measure(body, g.xs[static_cast<std::size_t>(i)],
                                                          n, d, g.ylo, g.yhi);
    // Fixed-order summation keeps results identical across thread counts.
    double total = 0.0;
    for (double v : vols) total += v;
    (void)parallel;
    return total;
}

std::vector<Vec> direction_set(int k) {
    std::vector<Vec> dirs;
    if (k == 1) {
        dirs.push_back({1.0});
        dirs.push_back({-1.0});
    } else if (k == 2) {
        for (int i = 0; i < 128; ++i) {
            double a = std::numbers::pi * i / 64.0;
            dirs.push_back({std::cos(a), std::sin(a)});
        }
    } else {
        // All primitive integer directions with entries in {-2,...,2}.
        std::vector<int> cur(k, -2);
        for (;;) {
            bool zero = std::all_of(cur.begin(), cur.end(), [](int v) { return v == 0; });
            if (!zero) {
                Vec v(cur.begin(), cur.end());
                double nn = norm2(v);
                v = (1.0 / nn) * v;
                bool dup = false;
                for (const Vec& w : dirs) {
                    double c = dot(v, w);
                    if (c > 1.0 - 1e-12) dup = true;
                }
                if (!dup) dirs.push_back(std::move(v));
            }
            int i = 0;
            while (i < k && cur[i] == 2) cur[i++] = -2;
            if (i == k) break;
            cur[i]++;
        }
    }
    return dirs;
}

ConvexBodySpec with_halfspace(const ConvexBodySpec& body, const Vec& a, double b) {
    Vec neg = -1.0 * a;
    return ConvexBodySpec::intersection(
        {body, ConvexBodySpec::polyhedron({Halfspace(std::move(neg), -b)})});
}

CenterpointEstimate centerpoint_impl(const ConvexBodySpec& body, int n, int d, int grid_res,
                                     bool parallel) {
    if (grid_res < 2) throw InputError("approx_centerpoint: grid_res must be >= 2");
    const int k = n + d;
    FiberGrid g = fiber_grid(body, n, d);
    std::vector<Vec> dirs = direction_set(k);

    // Candidate points: every integer part crossed with a y grid.
    std::vector<Vec> candidates;
    std::vector<long> yc(d, 0);
    for (const Vec& x : g.xs) {
        if (d == 0) {
            candidates.push_back(x);
            continue;
        }
        std::fill(yc.begin(), yc.end(), 0);
        for (;;) {
            Vec z = x;
            for (int j = 0; j < d; ++j)
                z.push_back(g.ylo[j] +
                            (g.yhi[j] - g.ylo[j]) * static_cast<double>(yc[j]) / (grid_res - 1));
            candidates.push_back(std::move(z));
            int j = d - 1;
            while (j >= 0 && yc[j] == grid_res - 1) yc[j--] = 0;
            if (j < 0) break;
            yc[j]++;
        }
    }
    if (candidates.empty()) throw InputError("approx_centerpoint: empty candidate grid");

    const long m = static_cast<long>(candidates.size());
    std::vector<double> hs(candidates.size(), 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel && m > 4)
#endif
    for (long i = 0; i < m; ++i) {
        const Vec& z = candidates[static_cast<std::size_t>(i)];
        double worst = std::numeric_limits<double>::infinity();
        for (const Vec& a : dirs) {
            double mass = grid_volume(with_halfspace(body, a, dot(a, z)), g, n, d);
            worst = std::min(worst, mass);
        }
        hs[static_cast<std::size_t>(i)] = worst;
    }
    (void)parallel;
    std::size_t best = 0;
    for (std::size_t i = 1; i < hs.size(); ++i)
        if (hs[i] > hs[best]) best = i;

    CenterpointEstimate est;
    est.point = candidates[best];
    est.h = hs[best];
    est.nu = grid_volume(body, g, n, d);
    est.grid_res = grid_res;
    est.directions = static_cast<int>(dirs.size());
    return est;
}

}  // namespace

double mixed_integer_volume(const ConvexBodySpec& body, int n, int d) {
    return volume_impl(body, n, d, true);
}

double mixed_integer_volume_serial(const ConvexBodySpec& body, int n, int d) {
    return volume_impl(body, n, d, false);
}

double centerpoint_bound(int n, int d) {
    if (n == 0) {
        if (d == 0) throw InputError("centerpoint_bound: n + d must be >= 1");
        return std::pow(static_cast<double>(d) / (d + 1), d);
    }
    return 1.0 / (std::pow(2.0, n) * (d + 1));
}

CenterpointEstimate approx_centerpoint(const ConvexBodySpec& body, int n, int d, int grid_res) {
    if (n + d > 3) throw CapabilityError("approx_centerpoint: n + d must be <= 3");
    return centerpoint_impl(body, n, d, grid_res, true);
}

CenterpointEstimate approx_centerpoint_serial(const ConvexBodySpec& body, int n, int d,
                                              int grid_res) {
    if (n + d > 3) throw CapabilityError("approx_centerpoint: n + d must be <= 3");
    return centerpoint_impl(body, n, d, grid_res, false);
}

std::pair<OptimizeResult, long> centerpoint_strategy_run(const ConvexBodySpec& body,
                                                         const ObjectiveSpec& obj,
                                                         const ProblemParameters& p,
                                                         int grid_res) {
    p.validate();
    if (p.n + p.d > 3) throw CapabilityError("centerpoint_strategy_run: n + d must be <= 3");
    if (!(p.eps > 0) || !(p.M > 0))
        throw InputError("centerpoint_strategy_run: eps and M must be > 0");
    const int k = p.n + p.d;
    const double nu_stop = std::pow(p.rho * p.eps / (p.M * (2.0 * p.R + 1.0)), k);
    const bool constant_obj = std::holds_alternative<ConstantObjective>(obj.v);

    std::vector<Halfspace> region;
    for (int i = 0; i < k; ++i) {
        Vec e(k, 0.0);
        e[i] = 1.0;
        region.emplace_back(e, p.R);
        e[i] = -1.0;
        region.emplace_back(std::move(e), p.R);
    }

    OptimizeResult out;
    std::optional<Vec> best;
    double best_val = 0.0;
    long queries = 0;
    for (long iter = 0; iter < 100000; ++iter) {
        ConvexBodySpec search = ConvexBodySpec::polyhedron(region);
        double nu = mixed_integer_volume(search, p.n, p.d);
        if (nu <= nu_stop) break;
        CenterpointEstimate cp = centerpoint_impl(search, p.n, p.d, grid_res, true);
        OracleAnswer ans = query_separation(body, Point(cp.point));
        queries++;
        out.stats.separation_queries++;
        if (!ans.inside()) {
            region.push_back(*ans.separator);
            continue;
        }
        out.stats.first_order_queries++;
        FirstOrderAnswer fo = query_first_order(obj, Point(cp.point));
        if (!best || fo.value < best_val) {
            best = cp.point;
            best_val = fo.value;
        }
        if (constant_obj) break;  // the first feasible centerpoint settles it
        double gn = norm2(fo.subgradient);
        if (gn < 1e-12) break;
        Vec a = (1.0 / gn) * fo.subgradient;
        region.emplace_back(a, dot(a, cp.point));
    }
    if (best) {
        out.point = Point(std::move(*best));
        out.value = best_val;
    }
    return {out, queries};
}

}  // namespace mico
