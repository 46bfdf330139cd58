#include "mico/branchcut.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace mico {

namespace {

Vec unit(std::size_t i, std::size_t dim) {
    Vec e(dim, 0.0);
    e[i] = 1.0;
    return e;
}

LpProblem to_lp(const std::vector<Halfspace>& rows, const Vec& c) {
    const std::size_t k = c.size();
    LpProblem lp;
    lp.a = Matrix(rows.size(), k);
    lp.b.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) lp.a(i, j) = rows[i].normal[j];
        lp.b[i] = rows[i].offset;
    }
    lp.c = c;
    return lp;
}

double lp_max(const std::vector<Halfspace>& rows, const Vec& dir, long& lp_solves) {
    const std::size_t k = dir.size();
    Matrix a(rows.size(), k);
    Vec b(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < k; ++j) a(i, j) = rows[i].normal[j];
        b[i] = rows[i].offset;
    }
    lp_solves++;
    LpResult r = maximize_lp(a, b, dir);
    if (r.status == LpStatus::Unbounded) throw InstanceError("cg closure: unbounded direction");
    if (r.status == LpStatus::Infeasible) return -std::numeric_limits<double>::infinity();
    return r.value;
}

bool integer_normal_part(const Halfspace& h, int n, int d, IntegerVector& out) {
    out.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        double r = std::llround(h.normal[i]);
        if (std::abs(h.normal[i] - r) > 1e-9) return false;
        out[i] = static_cast<std::int64_t>(r);
    }
    for (int i = n; i < n + d; ++i)
        if (std::abs(h.normal[i]) > 1e-9) return false;
    return true;
}

bool same_cut(const Halfspace& a, const Halfspace& b) {
    if (std::abs(a.offset - b.offset) > 1e-9) return false;
    for (std::size_t i = 0; i < a.normal.size(); ++i)
        if (std::abs(a.normal[i] - b.normal[i]) > 1e-9) return false;
    return true;
}

}  // namespace

Disjunction Disjunction::variable(std::size_t i, long pi0, std::size_t dim) {
    Disjunction d;
    d.terms.push_back({Halfspace(unit(i, dim), static_cast<double>(pi0))});
    Vec neg(dim, 0.0);
    neg[i] = -1.0;
    d.terms.push_back({Halfspace(std::move(neg), -static_cast<double>(pi0 + 1))});
    return d;
}

Disjunction Disjunction::split(const IntegerVector& pi, long pi0, std::size_t dim) {
    if (pi.size() > dim) throw InputError("Disjunction::split: pi longer than dimension");
    Vec a(dim, 0.0);
    for (std::size_t i = 0; i < pi.size(); ++i) a[i] = static_cast<double>(pi[i]);
    Vec neg = -1.0 * a;
    Disjunction d;
    d.terms.push_back({Halfspace(std::move(a), static_cast<double>(pi0))});
    d.terms.push_back({Halfspace(std::move(neg), -static_cast<double>(pi0 + 1))});
    return d;
}

Halfspace cg_cut(const Halfspace& h, int n, int d) {
    IntegerVector a;
    if (!integer_normal_part(h, n, d, a))
        throw InputError("cg_cut: normal must be integral on integer coordinates "
                         "and zero on continuous ones");
    std::int64_t g = 0;
    for (auto v : a) g = std::gcd(g, v);
    if (g == 0) throw InputError("cg_cut: zero normal");
    Vec normal(h.normal.size(), 0.0);
    for (int i = 0; i < n; ++i) normal[i] = static_cast<double>(a[i] / g);
    double scaled = h.offset / static_cast<double>(g);
    double rounded = std::floor(scaled + 1e-9);
    return Halfspace(std::move(normal), rounded);
}

std::optional<Halfspace> disjunctive_cut(const std::vector<Halfspace>& p, const Disjunction& dis,
                                         const Vec& zhat) {
    if (dis.terms.size() != 2) throw InputError("disjunctive_cut: needs a two-term disjunction");
    const std::size_t k = zhat.size();
    for (const auto& term : dis.terms) {
        bool in = true;
        for (const Halfspace& h : term)
            if (!h.contains(zhat, 1e-9)) in = false;
        if (in) throw InputError("disjunctive_cut: zhat already satisfies the disjunction");
    }

    std::vector<Halfspace> s1 = p, s2 = p;
    s1.insert(s1.end(), dis.terms[0].begin(), dis.terms[0].end());
    s2.insert(s2.end(), dis.terms[1].begin(), dis.terms[1].end());
    const std::size_t m1 = s1.size(), m2 = s2.size();

    // Lift-and-project LP. Variables: a (k), b (1), u (m1), v (m2).
    // a = A1^T u, a = A2^T v, b >= b1^T u, b >= b2^T v, u,v >= 0, sum <= 1;
    // maximize <a, zhat> - b.
    const std::size_t nv = k + 1 + m1 + m2;
    const std::size_t off_u = k + 1, off_v = k + 1 + m1;
    std::vector<Vec> lhs;
    Vec rhs;
    auto add_row = [&](const Vec& row, double r) {
        lhs.push_back(row);
        rhs.push_back(r);
    };
    for (std::size_t j = 0; j < k; ++j) {
        Vec row(nv, 0.0);
        row[j] = -1.0;
        for (std::size_t i = 0; i < m1; ++i) row[off_u + i] = s1[i].normal[j];
        add_row(row, 0.0);
        for (auto& x : row) x = -x;
        add_row(row, 0.0);
    }
    for (std::size_t j = 0; j < k; ++j) {
        Vec row(nv, 0.0);
        row[j] = -1.0;
        for (std::size_t i = 0; i < m2; ++i) row[off_v + i] = s2[i].normal[j];
        add_row(row, 0.0);
        for (auto& x : row) x = -x;
        add_row(row, 0.0);
    }
    {
        Vec row(nv, 0.0);
        row[k] = -1.0;
        for (std::size_t i = 0; i < m1; ++i) row[off_u + i] = s1[i].offset;
        add_row(row, 0.0);
    }
    {
        Vec row(nv, 0.0);
        row[k] = -1.0;
        for (std::size_t i = 0; i < m2; ++i) row[off_v + i] = s2[i].offset;
        add_row(row, 0.0);
    }
    for (std::size_t i = 0; i < m1 + m2; ++i) {
        Vec row(nv, 0.0);
        row[off_u + i] = -1.0;
        add_row(row, 0.0);
    }
    {
        Vec row(nv, 0.0);
        for (std::size_t i = 0; i < m1 + m2; ++i) row[off_u + i] = 1.0;
        add_row(row, 1.0);
    }
    Matrix a(lhs.size(), nv);
    for (std::size_t i = 0; i < lhs.size(); ++i)
        for (std::size_t j = 0; j < nv; ++j) a(i, j) = lhs[i][j];
    Vec obj(nv, 0.0);
    for (std::size_t j = 0; j < k; ++j) obj[j] = zhat[j];
    obj[k] = -1.0;
    LpResult r = maximize_lp(a, rhs, obj);
    if (r.status != LpStatus::Optimal) throw NumericError("disjunctive_cut: separation LP failed");
    if (r.value <= 1e-7) return std::nullopt;
    Vec normal(r.x.begin(), r.x.begin() + k);
    if (norm2(normal) < 1e-10) return std::nullopt;  // both sides empty; nothing to report
    return Halfspace(std::move(normal), r.x[k]).normalized();
}

PolyInstance jeroslow_instance(int n) {
    if (n < 2) throw InputError("jeroslow_instance: n must be >= 2");
    const int nn = (n % 2 == 0) ? n + 1 : n;
    PolyInstance inst;
    inst.n = nn;
    inst.d = 0;
    inst.c.assign(nn, -1.0);  // maximize the sum
    inst.rows.emplace_back(Vec(nn, 1.0), 0.5 * nn);
    for (int i = 0; i < nn; ++i) {
        inst.rows.emplace_back(unit(i, nn), 1.0);
        Vec neg(nn, 0.0);
        neg[i] = -1.0;
        inst.rows.emplace_back(std::move(neg), 0.0);
    }
    return inst;
}

PolyInstance hidden_triangle_instance(double h) {
    if (!(h >= 1)) throw InputError("hidden_triangle_instance: h must be >= 1");
    PolyInstance inst;
    inst.n = 2;
    inst.d = 0;
    inst.c = {0.0, -1.0};  // maximize x2
    inst.rows.emplace_back(Vec{-2.0 * h, 1.0}, 0.0);
    inst.rows.emplace_back(Vec{2.0 * h, 1.0}, 2.0 * h);
    inst.rows.emplace_back(Vec{0.0, -1.0}, 0.0);
    return inst;
}

std::pair<OptimizeResult, RunStats> run_branch_and_cut(const PolyInstance& inst,
                                                       const BnCConfig& config) {
    const std::size_t k = inst.c.size();
    OptimizeResult out;
    RunStats stats;
    std::optional<Vec> incumbent;
    double ub = std::numeric_limits<double>::infinity();

    struct Node {
        std::vector<Halfspace> rows;
        double bound = -std::numeric_limits<double>::infinity();
        long id = 0;
        int depth = 0;
    };
    std::vector<Node> pool;
    long next_id = 0;
    pool.push_back({inst.rows, -std::numeric_limits<double>::infinity(), next_id++, 0});

    auto pick = [&]() -> Node {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pool.size(); ++i) {
            if (config.selection == NodeSelection::BestBound) {
                if (pool[i].bound < pool[best].bound ||
                    (pool[i].bound == pool[best].bound && pool[i].id < pool[best].id))
                    best = i;
            } else {
                if (pool[i].id > pool[best].id) best = i;  // LIFO
            }
        }
        Node n = std::move(pool[best]);
        pool.erase(pool.begin() + static_cast<long>(best));
        return n;
    };

    while (!pool.empty() && stats.nodes < config.max_nodes) {
        Node node = pick();
        stats.nodes++;
        stats.lp_solves++;
        LpResult lp = solve_lp(to_lp(node.rows, inst.c));
        if (lp.status == LpStatus::Unbounded)
            throw InstanceError("run_branch_and_cut: unbounded relaxation");
        if (lp.status == LpStatus::Infeasible) continue;

        bool pruned = false;
        for (int round = 0; !pruned; ++round) {
            if (lp.value >= ub - 1e-9) {
                pruned = true;
                break;
            }
            bool integral = true;
            for (int i = 0; i < inst.n && integral; ++i)
                if (std::abs(lp.x[i] - std::llround(lp.x[i])) > kTauInt) integral = false;
            if (integral) {
                Vec z = lp.x;
                for (int i = 0; i < inst.n; ++i) z[i] = std::llround(z[i]);
                if (lp.value < ub) {
                    ub = lp.value;
                    incumbent = std::move(z);
                }
                pruned = true;
                break;
            }
            if (!config.use_cg_cuts || round >= config.max_cut_rounds) break;
            // One CG pass over the current rows; add every violated rounding.
            long added = 0;
            std::vector<Halfspace> fresh;
            for (const Halfspace& row : node.rows) {
                IntegerVector dummy;
                if (!integer_normal_part(row, inst.n, inst.d, dummy)) continue;
                Halfspace cut = cg_cut(row, inst.n, inst.d);
                if (!cut.contains(lp.x, 1e-9) &&
                    std::none_of(node.rows.begin(), node.rows.end(),
                                 [&](const Halfspace& r) { return same_cut(r, cut); }) &&
                    std::none_of(fresh.begin(), fresh.end(),
                                 [&](const Halfspace& r) { return same_cut(r, cut); }))
                    fresh.push_back(std::move(cut));
            }
            for (auto& cut : fresh) {
                node.rows.push_back(std::move(cut));
                added++;
            }
            stats.cuts += added;
            if (added == 0) break;
            stats.lp_solves++;
            lp = solve_lp(to_lp(node.rows, inst.c));
            if (lp.status != LpStatus::Optimal) {
                pruned = true;
                break;
            }
        }
        if (pruned || !config.use_branching) continue;

        // Most-fractional integer coordinate, lowest index on ties.
        int branch = -1;
        double best_frac = kTauInt;
        for (int i = 0; i < inst.n; ++i) {
            double f = std::abs(lp.x[i] - std::llround(lp.x[i]));
            if (f > best_frac + 1e-12) {
                best_frac = f;
                branch = i;
            }
        }
        if (branch < 0) continue;
        long floor_v = static_cast<long>(std::floor(lp.x[branch]));
        Node down{node.rows, lp.value, next_id++, node.depth + 1};
        down.rows.emplace_back(unit(static_cast<std::size_t>(branch), k),
                               static_cast<double>(floor_v));
        Node up{node.rows, lp.value, next_id++, node.depth + 1};
        Vec neg(k, 0.0);
        neg[static_cast<std::size_t>(branch)] = -1.0;
        up.rows.emplace_back(std::move(neg), -static_cast<double>(floor_v + 1));
        pool.push_back(std::move(down));
        pool.push_back(std::move(up));
    }

    stats.proof_size = stats.nodes + stats.cuts;
    stats.best_value = ub;
    if (incumbent) {
        out.point = Point(std::move(*incumbent));
        out.value = ub;
    }
    out.stats.separation_queries = stats.lp_solves;
    return {out, stats};
}

std::pair<std::vector<Halfspace>, int> cg_round_closure(const std::vector<Halfspace>& rows,
                                                        const Vec& objective_max, int n, int d,
                                                        int max_rounds) {
    const int k = n + d;
    std::vector<Halfspace> cur = rows;
    long lp_solves = 0;

    // Generator family: all primitive integer normals with sup-norm <= 3 in
    // tiny pure-integer dimension; otherwise the rows themselves plus pair
    // sums with small positive integer multipliers.
    std::vector<IntegerVector> gens;
    auto push_gen = [&](IntegerVector g) {
        std::int64_t gc = 0;
        for (auto v : g) gc = std::gcd(gc, v);
        if (gc == 0) return;
        for (auto& v : g) v /= gc;
        if (std::none_of(gens.begin(), gens.end(), [&](const IntegerVector& x) { return x == g; }))
            gens.push_back(std::move(g));
    };
    if (n <= 2 && d == 0) {
        IntegerVector g(n, -3);
        for (;;) {
            push_gen(g);
            int i = 0;
            while (i < n && g[i] == 3) g[i++] = -3;
            if (i == n) break;
            g[i]++;
        }
    } else {
        std::vector<IntegerVector> base;
        for (const Halfspace& row : cur) {
            IntegerVector g;
            if (integer_normal_part(row, n, d, g)) base.push_back(std::move(g));
        }
        for (const auto& g : base) push_gen(g);
        for (std::size_t i = 0; i < base.size(); ++i)
            for (std::size_t j = i; j < base.size(); ++j)
                for (std::int64_t s = 1; s <= 3; ++s)
                    for (std::int64_t t = 1; t <= 3; ++t) {
                        IntegerVector g(n, 0);
                        for (int l = 0; l < n; ++l) g[l] = s * base[i][l] + t * base[j][l];
                        push_gen(std::move(g));
                    }
    }

    int rounds = 0;
    for (int r = 0; r < max_rounds; ++r) {
        long added = 0;
        for (const IntegerVector& g : gens) {
            Vec dir(k, 0.0);
            for (int i = 0; i < n; ++i) dir[i] = static_cast<double>(g[i]);
            double ubound = lp_max(cur, dir, lp_solves);
            if (!std::isfinite(ubound)) continue;
            double floored = std::floor(ubound + 1e-9);
            if (ubound - floored <= 1e-6) continue;  // already integral; no cut
            Halfspace cut(dir, floored);
            if (std::none_of(cur.begin(), cur.end(),
                             [&](const Halfspace& row) { return same_cut(row, cut); })) {
                cur.push_back(std::move(cut));
                added++;
            }
        }
        if (added == 0) break;
        rounds++;
        // Stop once the objective bound is certified integral and stable.
        double bound = lp_max(cur, objective_max, lp_solves);
        (void)bound;
    }
    return {cur, rounds};
}

}  // namespace mico
