#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mico/infolab.hpp"

namespace mico {

namespace {

constexpr double kBoundaryShift = 1e-9;  // times R; keeps query points strictly cut

bool integral_x(const Vec& z, int n, std::vector<int>& bits) {
    bits.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        double r = std::llround(z[i]);
        if (std::abs(z[i] - r) > kTauInt) return false;
        if (r != 0 && r != 1) return false;  // outside-frame x handled earlier
        bits[static_cast<std::size_t>(i)] = static_cast<int>(r);
    }
    return true;
}

long fiber_index(const std::vector<int>& bits) {
    long f = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) f |= static_cast<long>(bits[i]) << i;
    return f;
}

Vec fiber_point(long f, int n) {
    Vec x(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] = (f >> i) & 1;
    return x;
}

/// sigma_l = +1 where the fiber has x_l = 1 and -1 where x_l = 0; then
/// <sigma, x - x_f> <= 0 on [0,1]^n with equality only at the fiber itself.
Vec fiber_sign(long f, int n) {
    Vec s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = ((f >> i) & 1) ? 1.0 : -1.0;
    return s;
}

double max_live_width(const AdversaryState& st) {
    double w = 0.0;
    for (const auto& fb : st.fibers) {
        if (!fb.alive) continue;
        double m = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < fb.lo.size(); ++j) m = std::min(m, fb.hi[j] - fb.lo[j]);
        w = std::max(w, m);
    }
    return w;
}

void log_entry(AdversaryState& st, const Vec& z, long fiber, const char* kind,
               const OracleAnswer& ans) {
    AdversaryState::LogEntry e;
    e.index = static_cast<long>(st.log.size());
    e.fiber = fiber;
    e.counter = fiber >= 0 ? st.fibers[static_cast<std::size_t>(fiber)].counter : 0;
    e.kind = kind;
    e.max_width = max_live_width(st);
    e.query = z;
    e.answer = ans;
    st.log.push_back(std::move(e));
}

}  // namespace

double AdversaryState::per_fiber_cap() const { return d * std::log2(R / (3.0 * rho)); }

long AdversaryState::budget() const {
    return static_cast<long>(std::floor(std::ldexp(per_fiber_cap(), n)));
}

AdversaryState make_adversary(int n, int d, double R, double rho) {
    if (n < 0 || d < 1) throw InputError("make_adversary: needs n >= 0, d >= 1");
    if (!(R > 0) || !(rho > 0) || !(R > 3.0 * rho))
        throw InputError("make_adversary: needs 0 < 3 rho < R");
    AdversaryState st;
    st.n = n;
    st.d = d;
    st.R = R;
    st.rho = rho;
    st.fibers.assign(1u << n, {Vec(static_cast<std::size_t>(d), 0.0),
                               Vec(static_cast<std::size_t>(d), R), 0, true});
    return st;
}

OracleAnswer adversary_answer(AdversaryState& st, const Point& zp) {
    const Vec& z = zp.coords;
    const int n = st.n, d = st.d;
    if (static_cast<int>(z.size()) != n + d)
        throw InputError("adversary_answer: dimension mismatch");

    // Outside the ambient frame: separate with the violated face.
    for (int i = 0; i < n + d; ++i) {
        double lo = 0.0, hi = (i < n) ? 1.0 : st.R;
        if (z[static_cast<std::size_t>(i)] > hi + 1e-12) {
            Vec a(z.size(), 0.0);
            a[static_cast<std::size_t>(i)] = 1.0;
            auto ans = OracleAnswer::make_separator(Halfspace(std::move(a), hi));
            log_entry(st, z, -1, "outside", ans);
            return ans;
        }
        if (z[static_cast<std::size_t>(i)] < lo - 1e-12) {
            Vec a(z.size(), 0.0);
            a[static_cast<std::size_t>(i)] = -1.0;
            auto ans = OracleAnswer::make_separator(Halfspace(std::move(a), -lo));
            log_entry(st, z, -1, "outside", ans);
            return ans;
        }
    }
    // Outside the already-cut region: repeat the violated answer.
    for (const Halfspace& h : st.recorded) {
        if (!h.contains(z, 1e-12)) {
            auto ans = OracleAnswer::make_separator(h.normalized());
            log_entry(st, z, -1, "outside", ans);
            return ans;
        }
    }

    std::vector<int> bits;
    if (n > 0 && !integral_x(z, n, bits)) {
        auto ans = OracleAnswer::make_inside();
        st.inside_points.push_back(z);
        log_entry(st, z, -1, "inside", ans);
        return ans;
    }
    if (n == 0) bits.clear();
    const long f = fiber_index(bits);
    auto& fb = st.fibers[static_cast<std::size_t>(f)];
    const Vec sigma = fiber_sign(f, n);
    const Vec xf = fiber_point(f, n);

    if (static_cast<double>(fb.counter) >= st.per_fiber_cap()) {
        // Saturated fiber: cut the whole fiber away, keeping every other
        // fiber and every previously Inside-answered point.
        if (n == 0) throw CapabilityError("adversary_answer: continuous budget exhausted");
        double gamma = 1.0;
        for (const Vec& p : st.inside_points) {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += sigma[static_cast<std::size_t>(i)] *
                                              (p[static_cast<std::size_t>(i)] -
                                               xf[static_cast<std::size_t>(i)]);
            gamma = std::min(gamma, -s);
        }
        gamma *= 0.5;
        Vec a(z.size(), 0.0);
        for (int i = 0; i < n; ++i) a[static_cast<std::size_t>(i)] = sigma[static_cast<std::size_t>(i)];
        Halfspace h(std::move(a), dot(sigma, xf) - gamma);
        fb.alive = false;
        st.recorded.push_back(h);
        auto ans = OracleAnswer::make_separator(h.normalized());
        log_entry(st, z, f, "kill", ans);
        return ans;
    }

    // Halving answer on coordinate j, tilted so all other fibers stay intact.
    const int j = static_cast<int>(fb.counter % d);
    const double yj = z[static_cast<std::size_t>(n + j)];
    const double eta = kBoundaryShift * st.R;
    const bool keep_lower = (yj - fb.lo[static_cast<std::size_t>(j)]) >=
                            (fb.hi[static_cast<std::size_t>(j)] - yj);
    const double t = keep_lower ? yj - eta : yj + eta;

    double lambda = 4.0 * st.R;
    for (const Vec& p : st.inside_points) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
            s += sigma[static_cast<std::size_t>(i)] *
                 (p[static_cast<std::size_t>(i)] - xf[static_cast<std::size_t>(i)]);
        // s < 0 strictly for non-integral x; pick lambda large enough that
        // the tilt keeps p on the feasible side.
        double lhs = keep_lower ? p[static_cast<std::size_t>(n + j)] - t
                                : t - p[static_cast<std::size_t>(n + j)];
        if (lhs > 0 && s < 0) lambda = std::max(lambda, lhs / (-s) + 1.0);
    }

    Vec a(z.size(), 0.0);
    for (int i = 0; i < n; ++i)
        a[static_cast<std::size_t>(i)] = lambda * sigma[static_cast<std::size_t>(i)];
    a[static_cast<std::size_t>(n + j)] = keep_lower ? 1.0 : -1.0;
    double offset = (keep_lower ? t : -t) + lambda * dot(sigma, xf);
    Halfspace h(std::move(a), offset);

    if (keep_lower)
        fb.hi[static_cast<std::size_t>(j)] = t;
    else
        fb.lo[static_cast<std::size_t>(j)] = t;
    fb.counter++;
    st.counted_queries++;
    st.recorded.push_back(h);
    auto ans = OracleAnswer::make_separator(h.normalized());
    log_entry(st, z, f, "halving", ans);
    return ans;
}

std::pair<ConvexBodySpec, ConvexBodySpec> adversary_certificate(const AdversaryState& st,
                                                                double /*eps*/) {
    if (st.counted_queries >= st.budget())
        throw CertificateUnavailable("adversary_certificate: query budget spent");
    const int d = st.d;
    long pick = -1;
    for (std::size_t f = 0; f < st.fibers.size(); ++f) {
        const auto& fb = st.fibers[f];
        if (!fb.alive) continue;
        double w = std::numeric_limits<double>::infinity();
        for (int j = 0; j < d; ++j)
            w = std::min(w, fb.hi[static_cast<std::size_t>(j)] - fb.lo[static_cast<std::size_t>(j)]);
        if (w >= 3.0 * st.rho - 1e-6 * st.R) {
            pick = static_cast<long>(f);
            break;
        }
    }
    if (pick < 0) throw CertificateUnavailable("adversary_certificate: no wide fiber box left");

    const auto& fb = st.fibers[static_cast<std::size_t>(pick)];
    Vec xf = fiber_point(pick, st.n);
    auto box_corners = [&](double lo1, double hi1) {
        std::vector<Vec> pts;
        std::vector<int> c(static_cast<std::size_t>(d), 0);
        for (;;) {
            Vec p = xf;
            for (int j = 0; j < d; ++j) {
                double lo = (j == 0) ? lo1 : fb.lo[static_cast<std::size_t>(j)];
                double hi = (j == 0) ? hi1 : fb.lo[static_cast<std::size_t>(j)] + st.rho;
                p.push_back(c[static_cast<std::size_t>(j)] ? hi : lo);
            }
            pts.push_back(std::move(p));
            int j = d - 1;
            while (j >= 0 && c[static_cast<std::size_t>(j)] == 1) c[static_cast<std::size_t>(j--)] = 0;
            if (j < 0) break;
            c[static_cast<std::size_t>(j)] = 1;
        }
        return pts;
    };
    std::vector<Vec> g1 = box_corners(fb.lo[0], fb.lo[0] + st.rho);
    std::vector<Vec> g2 = box_corners(fb.hi[0] - st.rho, fb.hi[0]);
    for (const Vec& p : st.inside_points) {
        g1.push_back(p);
        g2.push_back(p);
    }
    return {ConvexBodySpec::hull(std::move(g1)), ConvexBodySpec::hull(std::move(g2))};
}

bool adversary_replay_consistent(const AdversaryState& st, const ConvexBodySpec& body) {
    const auto& gens = std::get<HullBody>(body.v).points;
    for (const auto& e : st.log) {
        if (e.answer.inside()) {
            if (!body_contains(body, e.query, 1e-6)) return false;
        } else {
            const Halfspace& h = *e.answer.separator;
            for (const Vec& g : gens)
                if (!h.contains(g, 1e-7)) return false;
            if (h.contains(e.query, -1e-12)) return false;  // must be strictly cut
        }
    }
    return true;
}

std::string adversary_match_csv(const AdversaryState& st) {
    std::ostringstream os;
    os << "query_index,fiber,counter,answer_kind,max_box_width\n";
    os.precision(12);
    for (const auto& e : st.log)
        os << e.index << ',' << e.fiber << ',' << e.counter << ',' << e.kind << ','
           << e.max_width << '\n';
    return os.str();
}

long run_adversary_match(AdversaryState& st, MatchStrategy strategy, std::uint64_t seed,
                         long counted_target) {
    const int n = st.n, d = st.d;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uy(0.0, st.R);
    std::uniform_int_distribution<long> ufiber(0, (1L << n) - 1);

    // Bisection bookkeeping: the strategy's own view of each fiber box.
    std::vector<Vec> blo(st.fibers.size(), Vec(static_cast<std::size_t>(d), 0.0));
    std::vector<Vec> bhi(st.fibers.size(), Vec(static_cast<std::size_t>(d), st.R));
    long turn = 0;

    long raw = 0;
    const long raw_cap = 1000 + 100 * std::max<long>(1, counted_target);
    while (st.counted_queries < counted_target && raw < raw_cap) {
        Vec q;
        long f = 0;
        int coord = 0;
        switch (strategy) {
            case MatchStrategy::Random: {
                f = ufiber(rng);
                q = fiber_point(f, n);
                for (int j = 0; j < d; ++j) q.push_back(uy(rng));
                break;
            }
            case MatchStrategy::Bisection: {
                f = turn % static_cast<long>(st.fibers.size());
                coord = static_cast<int>((turn / static_cast<long>(st.fibers.size())) % d);
                turn++;
                q = fiber_point(f, n);
                for (int j = 0; j < d; ++j)
                    q.push_back(0.5 * (blo[static_cast<std::size_t>(f)][static_cast<std::size_t>(j)] +
                                       bhi[static_cast<std::size_t>(f)][static_cast<std::size_t>(j)]));
                break;
            }
            case MatchStrategy::Centerpoint: {
                // Query the centerpoint of the strategy's surviving boxes:
                // the fiber with the widest box, at its midpoint.
                double bestw = -1.0;
                for (std::size_t i = 0; i < st.fibers.size(); ++i) {
                    double w = std::numeric_limits<double>::infinity();
                    for (int j = 0; j < d; ++j)
                        w = std::min(w, bhi[i][static_cast<std::size_t>(j)] -
                                            blo[i][static_cast<std::size_t>(j)]);
                    if (w > bestw) {
                        bestw = w;
                        f = static_cast<long>(i);
                    }
                }
                q = fiber_point(f, n);
                for (int j = 0; j < d; ++j)
                    q.push_back(0.5 * (blo[static_cast<std::size_t>(f)][static_cast<std::size_t>(j)] +
                                       bhi[static_cast<std::size_t>(f)][static_cast<std::size_t>(j)]));
                break;
            }
        }
        OracleAnswer ans = adversary_answer(st, Point(q));
        raw++;
        if (!ans.inside()) {
            // Update the strategy's box for the queried fiber from the cut's
            // y component (the tilt leaves other fibers untouched anyway).
            const Halfspace& h = *ans.separator;
            for (int j = 0; j < d; ++j) {
                double aj = h.normal[static_cast<std::size_t>(n + j)];
                if (std::abs(aj) < 1e-12) continue;
                double& lo = blo[static_cast<std::size_t>(f)][static_cast<std::size_t>(j)];
                double& hi = bhi[static_cast<std::size_t>(f)][static_cast<std::size_t>(j)];
                double mid = q[static_cast<std::size_t>(n + j)];
                if (aj > 0)
                    hi = std::min(hi, mid);
                else
                    lo = std::max(lo, mid);
            }
        }
        (void)coord;
    }
    return raw;
}

}  // namespace mico
