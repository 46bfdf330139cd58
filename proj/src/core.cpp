#include "mico/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mico/lp.hpp"

namespace mico {

ConvexBodySpec ConvexBodySpec::ball(Vec center, double radius, Norm norm) {
    if (!(radius > 0)) throw InputError("Ball: radius must be > 0");
    return {BallBody{std::move(center), radius, norm}};
}

ConvexBodySpec ConvexBodySpec::box(Vec lower, Vec upper) {
    if (lower.size() != upper.size()) throw InputError("Box: bound dimension mismatch");
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (lower[i] > upper[i]) throw InputError("Box: lower > upper");
    return {BoxBody{std::move(lower), std::move(upper)}};
}

ConvexBodySpec ConvexBodySpec::polyhedron(std::vector<Halfspace> rows) {
    return {PolyhedronBody{std::move(rows)}};
}

ConvexBodySpec ConvexBodySpec::ellipsoid(Ellipsoid e) { return {EllipsoidBodySpec{std::move(e)}}; }

ConvexBodySpec ConvexBodySpec::hull(std::vector<Vec> points) {
    if (points.empty()) throw InputError("Hull: needs at least one point");
    return {HullBody{std::move(points)}};
}

ConvexBodySpec ConvexBodySpec::intersection(std::vector<ConvexBodySpec> parts) {
    if (parts.empty()) throw InputError("Intersection: empty list");
    return {IntersectionBody{std::move(parts)}};
}

ConvexBodySpec ConvexBodySpec::oracle(std::function<OracleAnswer(const Vec&)> f, Vec lo, Vec hi) {
    return {OracleBody{std::move(f), std::move(lo), std::move(hi)}};
}

std::size_t ConvexBodySpec::dim() const {
    return std::visit(
        [](const auto& b) -> std::size_t {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, BallBody>) return b.center.size();
            else if constexpr (std::is_same_v<T, BoxBody>) return b.lower.size();
            else if constexpr (std::is_same_v<T, PolyhedronBody>)
                return b.rows.empty() ? 0 : b.rows.front().normal.size();
            else if constexpr (std::is_same_v<T, EllipsoidBodySpec>) return b.e.dim();
            else if constexpr (std::is_same_v<T, HullBody>) return b.points.front().size();
            else if constexpr (std::is_same_v<T, IntersectionBody>) return b.parts.front().dim();
            else return b.bbox_lower.size();
        },
        v);
}

ObjectiveSpec ObjectiveSpec::max_affine(std::vector<std::pair<Vec, double>> pieces) {
    if (pieces.empty()) throw InputError("MaxAffine: needs at least one piece");
    return {MaxAffineObjective{std::move(pieces)}};
}

ObjectiveSpec ObjectiveSpec::quadratic(Matrix q, Vec lin) {
    if (q.rows() != q.cols() || q.rows() != lin.size())
        throw InputError("Quadratic: dimension mismatch");
    for (std::size_t i = 0; i < q.rows(); ++i)
        for (std::size_t j = i + 1; j < q.cols(); ++j)
            if (std::abs(q(i, j) - q(j, i)) > 1e-9)
                throw InputError("Quadratic: matrix must be symmetric");
    return {QuadraticObjective{std::move(q), std::move(lin)}};
}

namespace {

void check_dim(std::size_t have, std::size_t want, const char* where) {
    if (have != want) throw InputError(std::string(where) + ": dimension mismatch");
}

OracleAnswer separate_ball(const BallBody& b, const Vec& z, double tau) {
    check_dim(z.size(), b.center.size(), "Ball");
    if (b.norm == Norm::Euclidean) {
        Vec r = z - b.center;
        double n = norm2(r);
        if (n <= b.radius + tau) return OracleAnswer::make_inside();
        Vec a = (1.0 / n) * r;
        return OracleAnswer::make_separator(Halfspace(a, dot(a, b.center) + b.radius));
    }
    // Sup-norm ball: separate along the worst coordinate.
    std::size_t worst = 0;
    double worst_v = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double v = std::abs(z[i] - b.center[i]);
        if (v > worst_v) { worst_v = v; worst = i; }
    }
    if (worst_v <= b.radius + tau) return OracleAnswer::make_inside();
    Vec a(z.size(), 0.0);
    a[worst] = (z[worst] > b.center[worst]) ? 1.0 : -1.0;
    return OracleAnswer::make_separator(Halfspace(a, dot(a, b.center) + b.radius));
}

OracleAnswer separate_box(const BoxBody& b, const Vec& z, double tau) {
    check_dim(z.size(), b.lower.size(), "Box");
    for (std::size_t i = 0; i < z.size(); ++i) {
        if (z[i] > b.upper[i] + tau) {
            Vec a(z.size(), 0.0);
            a[i] = 1.0;
            return OracleAnswer::make_separator(Halfspace(std::move(a), b.upper[i]));
        }
        if (z[i] < b.lower[i] - tau) {
            Vec a(z.size(), 0.0);
            a[i] = -1.0;
            return OracleAnswer::make_separator(Halfspace(std::move(a), -b.lower[i]));
        }
    }
    return OracleAnswer::make_inside();
}

OracleAnswer separate_polyhedron(const PolyhedronBody& b, const Vec& z, double tau) {
    for (const Halfspace& row : b.rows) {
        check_dim(z.size(), row.normal.size(), "Polyhedron");
        double scale = std::max(1.0, norm2(row.normal));
        if (dot(row.normal, z) > row.offset + tau * scale)
            return OracleAnswer::make_separator(row.normalized());
    }
    return OracleAnswer::make_inside();
}

OracleAnswer separate_ellipsoid(const EllipsoidBodySpec& b, const Vec& z, double tau) {
    check_dim(z.size(), b.e.dim(), "EllipsoidBody");
    if (b.e.quad_form(z) <= 1.0 + tau) return OracleAnswer::make_inside();
    Vec g = b.e.shape.solve(z - b.e.center);
    double n = norm2(g);
    Vec a = (1.0 / n) * g;
    double support = dot(a, b.e.center) + std::sqrt(dot(a, b.e.shape.matrix().apply(a)));
    return OracleAnswer::make_separator(Halfspace(std::move(a), support));
}

// One LP does both membership and separation for a point hull:
// maximize <a, z> - b  s.t.  <a, p_i> <= b for all i,  |a_j| <= 1.
OracleAnswer separate_hull(const HullBody& b, const Vec& z, double tau) {
    const std::size_t k = z.size();
    check_dim(b.points.front().size(), k, "Hull");
    const std::size_t m = b.points.size();
    Matrix a(m + 2 * k, k + 1);
    Vec rhs(m + 2 * k, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < k; ++j) a(i, j) = b.points[i][j];
        a(i, k) = -1.0;
    }
    for (std::size_t j = 0; j < k; ++j) {
        a(m + 2 * j, j) = 1.0;
        rhs[m + 2 * j] = 1.0;
        a(m + 2 * j + 1, j) = -1.0;
        rhs[m + 2 * j + 1] = 1.0;
    }
    Vec obj(k + 1, 0.0);
    for (std::size_t j = 0; j < k; ++j) obj[j] = z[j];
    obj[k] = -1.0;
    LpResult r = maximize_lp(a, rhs, obj);
    if (r.status != LpStatus::Optimal) throw NumericError("Hull separation LP failed");
    if (r.value <= tau) return OracleAnswer::make_inside();
    Vec normal(r.x.begin(), r.x.begin() + k);
    return OracleAnswer::make_separator(Halfspace(std::move(normal), r.x[k]).normalized());
}

}  // namespace

OracleAnswer query_separation(const ConvexBodySpec& body, const Point& z, double tau_feas) {
    const Vec& p = z.coords;
    return std::visit(
        [&](const auto& b) -> OracleAnswer {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, BallBody>) return separate_ball(b, p, tau_feas);
            else if constexpr (std::is_same_v<T, BoxBody>) return separate_box(b, p, tau_feas);
            else if constexpr (std::is_same_v<T, PolyhedronBody>)
                return separate_polyhedron(b, p, tau_feas);
            else if constexpr (std::is_same_v<T, EllipsoidBodySpec>)
                return separate_ellipsoid(b, p, tau_feas);
            else if constexpr (std::is_same_v<T, HullBody>) return separate_hull(b, p, tau_feas);
            else if constexpr (std::is_same_v<T, IntersectionBody>) {
                for (const ConvexBodySpec& part : b.parts) {
                    OracleAnswer ans = query_separation(part, z, tau_feas);
                    if (!ans.inside()) return ans;
                }
                return OracleAnswer::make_inside();
            } else {
                return b.separate(p);
            }
        },
        body.v);
}

bool body_contains(const ConvexBodySpec& body, const Vec& z, double tol) {
    return query_separation(body, Point(z), tol).inside();
}

FirstOrderAnswer query_first_order(const ObjectiveSpec& obj, const Point& z) {
    const Vec& p = z.coords;
    return std::visit(
        [&](const auto& o) -> FirstOrderAnswer {
            using T = std::decay_t<decltype(o)>;
            if constexpr (std::is_same_v<T, LinearObjective>) {
                check_dim(p.size(), o.c.size(), "Linear objective");
                return {dot(o.c, p), o.c};
            } else if constexpr (std::is_same_v<T, MaxAffineObjective>) {
                double best = -std::numeric_limits<double>::infinity();
                std::size_t best_i = 0;
                for (std::size_t i = 0; i < o.pieces.size(); ++i) {
                    check_dim(p.size(), o.pieces[i].first.size(), "MaxAffine objective");
                    double v = dot(o.pieces[i].first, p) + o.pieces[i].second;
                    if (v > best) { best = v; best_i = i; }  // strict: lowest index wins ties
                }
                return {best, o.pieces[best_i].first};
            } else if constexpr (std::is_same_v<T, QuadraticObjective>) {
                check_dim(p.size(), o.q_vec.size(), "Quadratic objective");
                Vec qz = o.q_mat.apply(p);
                return {0.5 * dot(p, qz) + dot(o.q_vec, p), qz + o.q_vec};
            } else {
                return {o.value, Vec(p.size(), 0.0)};
            }
        },
        obj.v);
}

double objective_value(const ObjectiveSpec& obj, const Vec& z) {
    return query_first_order(obj, Point(z)).value;
}

double euclidean_depth(const ConvexBodySpec& body, const Vec& z) {
    return std::visit(
        [&](const auto& b) -> double {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, BallBody>) {
                if (b.norm == Norm::Euclidean) return b.radius - norm2(z - b.center);
                double m = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < z.size(); ++i)
                    m = std::min(m, b.radius - std::abs(z[i] - b.center[i]));
                return m;
            } else if constexpr (std::is_same_v<T, BoxBody>) {
                double m = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < z.size(); ++i)
                    m = std::min({m, b.upper[i] - z[i], z[i] - b.lower[i]});
                return m;
            } else if constexpr (std::is_same_v<T, PolyhedronBody>) {
                double m = std::numeric_limits<double>::infinity();
                for (const Halfspace& row : b.rows)
                    m = std::min(m, (row.offset - dot(row.normal, z)) / norm2(row.normal));
                return m;
            } else if constexpr (std::is_same_v<T, IntersectionBody>) {
                double m = std::numeric_limits<double>::infinity();
                for (const ConvexBodySpec& part : b.parts)
                    m = std::min(m, euclidean_depth(part, z));
                return m;
            } else {
                throw CapabilityError("euclidean_depth: unsupported body kind");
            }
        },
        body.v);
}

std::pair<Vec, Vec> bounding_box(const ConvexBodySpec& body) {
    return std::visit(
        [&](const auto& b) -> std::pair<Vec, Vec> {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, BallBody>) {
                Vec lo = b.center, hi = b.center;
                for (std::size_t i = 0; i < lo.size(); ++i) {
                    lo[i] -= b.radius;
                    hi[i] += b.radius;
                }
                return {lo, hi};
            } else if constexpr (std::is_same_v<T, BoxBody>) {
                return {b.lower, b.upper};
            } else if constexpr (std::is_same_v<T, PolyhedronBody>) {
                const std::size_t k = b.rows.front().normal.size();
                Matrix a(b.rows.size(), k);
                Vec rhs(b.rows.size());
                for (std::size_t i = 0; i < b.rows.size(); ++i) {
                    for (std::size_t j = 0; j < k; ++j) a(i, j) = b.rows[i].normal[j];
                    rhs[i] = b.rows[i].offset;
                }
                Vec lo(k), hi(k);
                for (std::size_t j = 0; j < k; ++j) {
                    Vec e(k, 0.0);
                    e[j] = 1.0;
                    LpResult up = maximize_lp(a, rhs, e);
                    e[j] = -1.0;
                    LpResult dn = maximize_lp(a, rhs, e);
                    if (up.status != LpStatus::Optimal || dn.status != LpStatus::Optimal)
                        throw InputError("bounding_box: unbounded or empty polyhedron");
                    hi[j] = up.value;
                    lo[j] = -dn.value;
                }
                return {lo, hi};
            } else if constexpr (std::is_same_v<T, EllipsoidBodySpec>) {
                const std::size_t k = b.e.dim();
                Vec lo(k), hi(k);
                for (std::size_t j = 0; j < k; ++j) {
                    double half = std::sqrt(std::max(0.0, b.e.shape(j, j)));
                    lo[j] = b.e.center[j] - half;
                    hi[j] = b.e.center[j] + half;
                }
                return {lo, hi};
            } else if constexpr (std::is_same_v<T, HullBody>) {
                Vec lo = b.points.front(), hi = b.points.front();
                for (const Vec& pt : b.points)
                    for (std::size_t i = 0; i < pt.size(); ++i) {
                        lo[i] = std::min(lo[i], pt[i]);
                        hi[i] = std::max(hi[i], pt[i]);
                    }
                return {lo, hi};
            } else if constexpr (std::is_same_v<T, IntersectionBody>) {
                auto [lo, hi] = bounding_box(b.parts.front());
                for (std::size_t p = 1; p < b.parts.size(); ++p) {
                    auto [l2, h2] = bounding_box(b.parts[p]);
                    for (std::size_t i = 0; i < lo.size(); ++i) {
                        lo[i] = std::max(lo[i], l2[i]);
                        hi[i] = std::min(hi[i], h2[i]);
                    }
                }
                return {lo, hi};
            } else {
                return {b.bbox_lower, b.bbox_upper};
            }
        },
        body.v);
}

Transcript Transcript::truncate(std::size_t k) const {
    Transcript t;
    t.entries.assign(entries.begin(), entries.begin() + std::min(k, entries.size()));
    return t;
}

Transcript transcript_append(const Transcript& t, TranscriptEntry entry) {
    Transcript out = t;
    out.entries.push_back(std::move(entry));
    return out;
}

}  // namespace mico
