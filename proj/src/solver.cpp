#include "mico/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>

#include "mico/lattice.hpp"

namespace mico {

namespace {

using SepFn = std::function<OracleAnswer(const Vec&)>;

/// Thrown by a slice oracle when a pulled-back cut is constant over the
/// slice: the whole slice is infeasible (or, in exact mode, cannot improve).
struct SliceEmptyError {};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

Vec to_vec(const IntegerVector& w) {
    Vec v(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = static_cast<double>(w[i]);
    return v;
}

Matrix basis_matrix(const std::vector<IntegerVector>& basis, std::size_t n) {
    Matrix b(n, basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j)
        for (std::size_t i = 0; i < n; ++i) b(i, j) = static_cast<double>(basis[j][i]);
    return b;
}

/// ||B^+||_2 <= sqrt(trace((B^T B)^{-1})); bounds ||u|| by this times ||B u||.
double pinv_norm_bound(const Matrix& b) {
    Matrix g = b.transpose().multiply(b);
    Matrix gi = Cholesky(g).inverse();
    double tr = 0.0;
    for (std::size_t i = 0; i < gi.rows(); ++i) tr += gi(i, i);
    return std::sqrt(tr);
}

Vec concat(const Vec& a, const Vec& b) {
    Vec out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

/// Pull a halfspace in (x, y) back through x = x0 + B u to (u, y) coordinates.
/// Throws SliceEmptyError when the pullback normal vanishes.
Halfspace pull_back(const Halfspace& h, const Vec& x0, const Matrix& b, std::size_t /*d*/) {
    const std::size_t n = x0.size();
    Vec ax(h.normal.begin(), h.normal.begin() + n);
    Vec normal = b.apply_transpose(ax);
    normal.insert(normal.end(), h.normal.begin() + n, h.normal.end());
    double offset = h.offset - dot(ax, x0);
    if (norm2(normal) < 1e-10) throw SliceEmptyError{};
    return Halfspace(std::move(normal), offset).normalized();
}

/// Visit lo..hi starting from the value nearest t, alternating outward.
std::vector<long> center_out_range(double t, long lo, long hi) {
    std::vector<long> out;
    if (lo > hi) return out;
    long base = std::clamp(static_cast<long>(std::llround(t)), lo, hi);
    out.push_back(base);
    for (long off = 1; static_cast<long>(out.size()) < hi - lo + 1; ++off) {
        if (base + off <= hi) out.push_back(base + off);
        if (base - off >= lo) out.push_back(base - off);
    }
    return out;
}

struct SliceChild {
    Vec x0_local;       // in node integer coordinates
    Matrix b_local;     // node-n x (node-n - 1)
    SepFn oracle;       // child separation oracle
    double radius = 0;  // outer ball radius for the child node
};

/// Build the child node for slice <w, x> = m of the current node. X0/Btot is
/// the composed map from node integer coordinates to the original ones;
/// r_orig is the global radius bound, d the continuous dimension.
SliceChild make_slice_child(const SepFn& oracle, const SliceBasis& sb, std::size_t n_cur,
                            std::size_t d, const Vec& x0_total, const Matrix& b_total,
                            double r_orig) {
    SliceChild c;
    c.x0_local = to_vec(sb.x0);
    c.b_local = basis_matrix(sb.basis, n_cur);
    Vec x0l = c.x0_local;
    Matrix bl = c.b_local;
    c.oracle = [oracle, x0l, bl, d](const Vec& uy) -> OracleAnswer {
        const std::size_t nc = bl.cols();
        Vec u(uy.begin(), uy.begin() + nc);
        Vec x = x0l + bl.apply(u);
        Vec z = concat(x, Vec(uy.begin() + nc, uy.end()));
        OracleAnswer ans = oracle(z);
        if (ans.inside()) return ans;
        return OracleAnswer::make_separator(pull_back(*ans.separator, x0l, bl, d));
    };
    if (n_cur == 1) {
        c.radius = r_orig;  // only the y block remains
    } else {
        Vec x0_new = x0_total + b_total.apply(c.x0_local);
        Matrix b_new = b_total.multiply(c.b_local);
        double ru = pinv_norm_bound(b_new) * (r_orig + norm2(x0_new));
        c.radius = (d > 0) ? std::sqrt(ru * ru + r_orig * r_orig) : ru;
    }
    return c;
}

struct NodeContext {
    double r_orig = 0;
    double delta = 0;  // volume stopping radius; <= 0 disables the stop rule
    SolveStats* stats = nullptr;
};

std::optional<Vec> feas_node(const SepFn& oracle, std::size_t n_cur, std::size_t d,
                             double node_radius, const Vec& x0_total, const Matrix& b_total,
                             const NodeContext& ctx);

/// Run all slices of direction w over m in [t - halfwidth, t + halfwidth],
/// center out. Returns the first point found, in node coordinates.
std::optional<Vec> run_slices(const SepFn& oracle, const IntegerVector& w, double t,
                              double halfwidth, std::size_t n_cur, std::size_t d,
                              const Vec& x0_total, const Matrix& b_total,
                              const NodeContext& ctx) {
    auto lo = static_cast<long>(std::ceil(t - halfwidth - 1e-9));
    auto hi = static_cast<long>(std::floor(t + halfwidth + 1e-9));
    for (long m : center_out_range(t, lo, hi)) {
        auto sb = kernel_slice_basis(w, m);
        if (!sb) continue;
        try {
            SliceChild child = make_slice_child(oracle, *sb, n_cur, d, x0_total, b_total,
                                                ctx.r_orig);
            if (n_cur - 1 + d == 0) {
                // Zero-dimensional slice: the single point x0.
                OracleAnswer ans = oracle(child.x0_local);
                if (ans.inside()) return child.x0_local;
                continue;
            }
            Vec x0_new = x0_total + b_total.apply(child.x0_local);
            Matrix b_new = b_total.multiply(child.b_local);
            auto sub = feas_node(child.oracle, n_cur - 1, d, child.radius, x0_new, b_new, ctx);
            if (sub) {
                Vec u(sub->begin(), sub->begin() + (n_cur - 1));
                Vec x = child.x0_local + child.b_local.apply(u);
                return concat(x, Vec(sub->begin() + (n_cur - 1), sub->end()));
            }
        } catch (const SliceEmptyError&) {
            // Entire slice cut off by a single constraint.
        }
    }
    return std::nullopt;
}

std::optional<Vec> feas_node(const SepFn& oracle, std::size_t n_cur, std::size_t d,
                             double node_radius, const Vec& x0_total, const Matrix& b_total,
                             const NodeContext& ctx) {
    const std::size_t k = n_cur + d;
    ctx.stats->recursion_nodes++;
    Ellipsoid e = Ellipsoid::ball(Vec(k, 0.0), node_radius);
    const double stop_lv =
        log_unit_ball_volume(k) + static_cast<double>(k) * std::log(ctx.delta);

    while (log_volume(e) >= stop_lv) {
        if (n_cur == 0) {
            OracleAnswer ans = oracle(e.center);
            if (ans.inside()) return e.center;
            auto next = shallow_cut_update(e, *ans.separator, 0.0);
            if (!next) throw NumericError("feasibility: separator does not cut the center");
            e = std::move(*next);
            ctx.stats->ellipsoid_updates++;
            continue;
        }
        const double beta = 1.0 / static_cast<double>(k + 1);
        Ellipsoid eproj = project_to_integer_coordinates(e, n_cur);
        IntegerVector xi = cvp(eproj.shape, eproj.center);
        Vec xhat = to_vec(xi);
        double dist = std::sqrt(std::max(0.0, eproj.quad_form(xhat)));
        if (dist <= beta - 1e-12) {
            // Near-integral projection center: query the best point on the fiber.
            Vec z = min_norm_over_fiber(e, xhat);
            for (std::size_t i = 0; i < n_cur; ++i) z[i] = xhat[i];
            OracleAnswer ans = oracle(z);
            if (ans.inside()) return z;
            auto next = shallow_cut_update(e, *ans.separator, beta);
            if (!next) throw NumericError("feasibility: shallow cut unexpectedly rejected");
            e = std::move(*next);
            ctx.stats->ellipsoid_updates++;
            continue;
        }
        // Flat case: every remaining integer point lies on one of few slices.
        IntegerVector w = flatness_direction(eproj.shape);
        double width = ellipsoid_width(eproj.shape, w);
        double bound = static_cast<double>(n_cur) * static_cast<double>(k + 1);
        if (width > bound * (1.0 + 1e-9) + 1e-9)
            throw NumericError("feasibility: flatness width bound violated");
        double t = dot(to_vec(w), eproj.center);
        return run_slices(oracle, w, t, bound, n_cur, d, x0_total, b_total, ctx);
    }
    return std::nullopt;
}

void snap_integers(Vec& z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        double r = std::llround(z[i]);
        if (std::abs(z[i] - r) > kTauInt)
            throw NumericError("solver: leading coordinate not integral");
        z[i] = r;
    }
}

FeasibilityResult feasibility_oracle(const SepFn& base, const ProblemParameters& p,
                                     SolveStats& stats) {
    p.validate();
    const auto n = static_cast<std::size_t>(p.n);
    const auto d = static_cast<std::size_t>(p.d);
    NodeContext ctx{p.R, p.delta, &stats};
    Timer timer;
    auto z = feas_node(base, n, d, p.R, Vec(n, 0.0), Matrix::identity(n), ctx);
    stats.wall_ms += timer.ms();
    FeasibilityResult out;
    out.stats = stats;
    if (z) {
        snap_integers(*z, n);
        out.point = Point(std::move(*z));
        out.stats = stats;
    }
    return out;
}

SepFn counting_oracle(const ConvexBodySpec& body, SolveStats& stats) {
    return [&body, &stats](const Vec& z) {
        stats.separation_queries++;
        return query_separation(body, Point(z));
    };
}

/// Kill cut used when a subgradient vanishes (the level set is empty or the
/// current point is already optimal): pushes the region below the R ball.
Halfspace kill_cut(const Vec& z, double r) {
    Vec a(z.size(), 0.0);
    a[0] = 1.0;
    return Halfspace(std::move(a), z[0] - 4.0 * r);
}

}  // namespace

FeasibilityResult feasibility(const ConvexBodySpec& body, const ProblemParameters& p) {
    SolveStats stats;
    return feasibility_oracle(counting_oracle(body, stats), p, stats);
}

OptimizeResult optimize(const ConvexBodySpec& body, const ObjectiveSpec& obj,
                        const ProblemParameters& p) {
    p.validate();
    if (!(p.eps > 0)) throw InputError("optimize: eps must be > 0");
    if (!(p.M > 0)) throw InputError("optimize: M must be > 0");
    OptimizeResult out;
    Timer timer;
    ProblemParameters pf = p;
    pf.delta = p.eps * p.rho / (4.0 * p.M * p.R);

    SolveStats& stats = out.stats;
    auto level_oracle = [&](double gamma) -> SepFn {
        return [&, gamma](const Vec& z) -> OracleAnswer {
            stats.separation_queries++;
            OracleAnswer ans = query_separation(body, Point(z));
            if (!ans.inside()) return ans;
            stats.first_order_queries++;
            FirstOrderAnswer fo = query_first_order(obj, Point(z));
            if (fo.value <= gamma) return OracleAnswer::make_inside();
            double gn = norm2(fo.subgradient);
            if (gn < 1e-12) return OracleAnswer::make_separator(kill_cut(z, p.R));
            Vec a = (1.0 / gn) * fo.subgradient;
            double offset = (dot(fo.subgradient, z) + gamma - fo.value) / gn;
            return OracleAnswer::make_separator(Halfspace(std::move(a), offset));
        };
    };

    FeasibilityResult first = feasibility_oracle(counting_oracle(body, stats), pf, stats);
    if (!first.found()) {
        out.stats.wall_ms = timer.ms();
        return out;
    }
    stats = first.stats;
    Vec best = first.point->coords;
    double best_val = objective_value(obj, best);

    double lo = best_val - 2.0 * p.M * p.R;
    double hi = best_val;
    while (hi - lo > 0.5 * p.eps) {
        double gamma = 0.5 * (lo + hi);
        stats.feasibility_calls++;
        FeasibilityResult r = feasibility_oracle(level_oracle(gamma), pf, stats);
        stats = r.stats;
        if (r.found()) {
            Vec z = r.point->coords;
            double v = objective_value(obj, z);
            if (v < best_val) {
                best = std::move(z);
                best_val = v;
            }
            hi = std::min(gamma, best_val);
        } else {
            lo = gamma;
        }
    }
    out.point = Point(std::move(best));
    out.value = best_val;
    out.stats = stats;
    out.stats.wall_ms = timer.ms();
    return out;
}

OptimizeResult optimize_single_pass(const ConvexBodySpec& body, const ObjectiveSpec& obj,
                                    const ProblemParameters& p) {
    p.validate();
    if (!(p.eps > 0)) throw InputError("optimize_single_pass: eps must be > 0");
    if (!(p.M > 0)) throw InputError("optimize_single_pass: M must be > 0");
    OptimizeResult out;
    Timer timer;
    ProblemParameters pf = p;
    pf.delta = p.eps * p.rho / (2.0 * p.M * p.R);

    SolveStats& stats = out.stats;
    bool constant_obj = std::holds_alternative<ConstantObjective>(obj.v);
    std::optional<Vec> best;
    double best_val = 0.0;
    SepFn oracle = [&](const Vec& z) -> OracleAnswer {
        stats.separation_queries++;
        OracleAnswer ans = query_separation(body, Point(z));
        if (!ans.inside()) return ans;
        stats.first_order_queries++;
        FirstOrderAnswer fo = query_first_order(obj, Point(z));
        if (!best || fo.value < best_val) {
            best = z;
            best_val = fo.value;
        }
        if (constant_obj) return OracleAnswer::make_inside();
        double gn = norm2(fo.subgradient);
        if (gn < 1e-12) return OracleAnswer::make_separator(kill_cut(z, p.R));
        // Restrict to the strictly-better level set through z.
        Vec a = (1.0 / gn) * fo.subgradient;
        return OracleAnswer::make_separator(Halfspace(std::move(a), dot(a, z)));
    };

    FeasibilityResult r = feasibility_oracle(oracle, pf, stats);
    stats = r.stats;
    if (constant_obj && r.found()) {
        best = r.point->coords;
        best_val = objective_value(obj, *best);
    }
    if (best) {
        out.point = Point(std::move(*best));
        out.value = best_val;
    }
    out.stats = stats;
    out.stats.wall_ms = timer.ms();
    return out;
}

OptimizeResult ellipsoid_continuous(const ConvexBodySpec& body, const ObjectiveSpec& obj,
                                    const ProblemParameters& p) {
    p.validate();
    if (p.n != 0) throw InputError("ellipsoid_continuous: requires n = 0");
    if (!(p.eps > 0)) throw InputError("ellipsoid_continuous: eps must be > 0");
    if (!(p.M > 0)) throw InputError("ellipsoid_continuous: M must be > 0");
    OptimizeResult out;
    Timer timer;
    const auto d = static_cast<std::size_t>(p.d);
    const double delta = p.eps * p.rho / (2.0 * p.M * p.R);
    Ellipsoid e = Ellipsoid::ball(Vec(d, 0.0), p.R);
    const double stop_lv = log_unit_ball_volume(d) + static_cast<double>(d) * std::log(delta);

    std::optional<Vec> best;
    double best_val = 0.0;
    SolveStats& stats = out.stats;
    while (log_volume(e) >= stop_lv) {
        OracleAnswer ans = query_separation(body, Point(e.center));
        stats.separation_queries++;
        Halfspace cut;
        if (!ans.inside()) {
            cut = *ans.separator;
        } else {
            stats.first_order_queries++;
            FirstOrderAnswer fo = query_first_order(obj, Point(e.center));
            if (!best || fo.value < best_val) {
                best = e.center;
                best_val = fo.value;
            }
            double gn = norm2(fo.subgradient);
            if (gn < 1e-12) break;  // unconstrained minimum reached
            Vec a = (1.0 / gn) * fo.subgradient;
            cut = Halfspace(a, dot(a, e.center));
        }
        auto next = shallow_cut_update(e, cut, 0.0);
        if (!next) throw NumericError("ellipsoid_continuous: cut does not pass the center");
        e = std::move(*next);
        stats.ellipsoid_updates++;
    }
    if (best) {
        out.point = Point(std::move(*best));
        out.value = best_val;
    }
    out.stats = stats;
    out.stats.wall_ms = timer.ms();
    return out;
}

namespace {

struct ExactContext {
    double r_orig = 0;
    SolveStats* stats = nullptr;
};

/// Exact node: shrink with cuts while the lattice width is large, then slice.
/// The wrapped oracle never answers Inside (feasible points yield subgradient
/// cuts that keep every strictly better integer point), so the recursion
/// terminates only by exhausting slices.
void exact_node(const SepFn& oracle, std::size_t n_cur, double node_radius,
                const Vec& x0_total, const Matrix& b_total, const ExactContext& ctx) {
    ctx.stats->recursion_nodes++;
    Ellipsoid e = Ellipsoid::ball(Vec(n_cur, 0.0), node_radius);
    const double beta = 1.0 / static_cast<double>(n_cur + 1);
    const double slice_bound = static_cast<double>(n_cur) * static_cast<double>(n_cur + 1);
    for (;;) {
        IntegerVector w = flatness_direction(e.shape);
        double width = ellipsoid_width(e.shape, w);
        bool slice_now = width <= slice_bound + 1e-9;
        Vec xhat;
        if (!slice_now) {
            xhat = to_vec(cvp(e.shape, e.center));
            double dist = std::sqrt(std::max(0.0, e.quad_form(xhat)));
            // Wide and no near-central integer point would contradict the
            // flatness bound; slice with the actual width to stay sound.
            slice_now = dist > beta - 1e-12;
        }
        if (slice_now) {
            double t = dot(to_vec(w), e.center);
            auto lo = static_cast<long>(std::ceil(t - 0.5 * width - 1e-9));
            auto hi = static_cast<long>(std::floor(t + 0.5 * width + 1e-9));
            for (long m : center_out_range(t, lo, hi)) {
                auto sb = kernel_slice_basis(w, m);
                if (!sb) continue;
                try {
                    SliceChild child = make_slice_child(oracle, *sb, n_cur, 0, x0_total,
                                                        b_total, ctx.r_orig);
                    if (n_cur == 1) {
                        oracle(child.x0_local);  // records best / always cuts
                        continue;
                    }
                    Vec x0_new = x0_total + b_total.apply(child.x0_local);
                    Matrix b_new = b_total.multiply(child.b_local);
                    exact_node(child.oracle, n_cur - 1, child.radius, x0_new, b_new, ctx);
                } catch (const SliceEmptyError&) {
                }
            }
            return;
        }
        OracleAnswer ans = oracle(xhat);
        if (ans.inside())
            throw NumericError("pure_integer_optimize: wrapped oracle answered Inside");
        auto next = shallow_cut_update(e, *ans.separator, beta);
        if (!next)
            throw NumericError("pure_integer_optimize: shallow cut unexpectedly rejected");
        e = std::move(*next);
        ctx.stats->ellipsoid_updates++;
    }
}

}  // namespace

OptimizeResult pure_integer_optimize(const ConvexBodySpec& body, const ObjectiveSpec& obj,
                                     const ProblemParameters& p) {
    p.validate();
    if (p.d != 0) throw InputError("pure_integer_optimize: requires d = 0");
    OptimizeResult out;
    Timer timer;
    const auto n = static_cast<std::size_t>(p.n);

    SolveStats& stats = out.stats;
    std::optional<Vec> best;
    double best_val = 0.0;
    SepFn oracle = [&](const Vec& z) -> OracleAnswer {
        stats.separation_queries++;
        OracleAnswer ans = query_separation(body, Point(z));
        if (!ans.inside()) return ans;
        stats.first_order_queries++;
        FirstOrderAnswer fo = query_first_order(obj, Point(z));
        if (!best || fo.value < best_val) {
            best = z;
            best_val = fo.value;
        }
        double gn = norm2(fo.subgradient);
        if (gn < 1e-12) return OracleAnswer::make_separator(kill_cut(z, p.R));
        // Convexity keeps every strictly better integer point on the kept side.
        Vec a = (1.0 / gn) * fo.subgradient;
        return OracleAnswer::make_separator(Halfspace(std::move(a), dot(a, z)));
    };

    ExactContext ctx{p.R, &stats};
    exact_node(oracle, n, p.R, Vec(n, 0.0), Matrix::identity(n), ctx);
    if (best) {
        snap_integers(*best, n);
        out.point = Point(std::move(*best));
        out.value = best_val;
    }
    out.stats = stats;
    out.stats.wall_ms = timer.ms();
    return out;
}

}  // namespace mico
