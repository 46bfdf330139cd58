#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mico/infolab.hpp"

using namespace mico;

TEST_CASE("adversary: fractional x answers Inside") {
    AdversaryState st = make_adversary(1, 1, 8.0, 0.125);
    OracleAnswer ans = adversary_answer(st, Point({0.5, 4.0}));
    CHECK(ans.inside());
    CHECK(st.counted_queries == 0);
}

TEST_CASE("adversary: halving keeps the longer half") {
    AdversaryState st = make_adversary(1, 1, 8.0, 1.0);
    OracleAnswer ans = adversary_answer(st, Point({0.0, 4.0}));
    REQUIRE_FALSE(ans.inside());
    CHECK(st.counted_queries == 1);
    const auto& fb = st.fibers[0];
    CHECK(fb.hi[0] - fb.lo[0] >= 4.0 - 1e-6);
    // The queried point is strictly cut off.
    CHECK_FALSE(ans.separator->contains({0.0, 4.0}, -1e-12));
}

TEST_CASE("adversary: out-of-frame query leaves boxes unchanged") {
    AdversaryState st = make_adversary(1, 1, 8.0, 1.0);
    OracleAnswer ans = adversary_answer(st, Point({0.0, 9.5}));
    REQUIRE_FALSE(ans.inside());
    CHECK(st.counted_queries == 0);
    CHECK(st.fibers[0].hi[0] == 8.0);
    CHECK(st.fibers[1].hi[0] == 8.0);
}

TEST_CASE("adversary: tilt preserves every other fiber box") {
    AdversaryState st = make_adversary(2, 2, 8.0, 0.125);
    // Interleave fiber queries with fractional Inside points.
    std::vector<Vec> queries = {{0.0, 0.0, 3.0, 5.0}, {0.3, 0.6, 2.0, 2.0},
                                {1.0, 0.0, 6.0, 1.0}, {0.0, 1.0, 1.0, 7.0},
                                {0.5, 0.5, 4.0, 4.0}, {1.0, 1.0, 2.5, 2.5}};
    for (const Vec& q : queries) {
        auto before = st.fibers;
        OracleAnswer ans = adversary_answer(st, Point(q));
        if (ans.inside()) continue;
        // Exactly one fiber box may change.
        int changed = 0;
        for (std::size_t f = 0; f < st.fibers.size(); ++f)
            if (st.fibers[f].lo != before[f].lo || st.fibers[f].hi != before[f].hi) changed++;
        CHECK(changed <= 1);
    }
    // Every recorded halfspace keeps every remaining live-box corner.
    for (std::size_t f = 0; f < st.fibers.size(); ++f) {
        const auto& fb = st.fibers[f];
        if (!fb.alive) continue;
        for (int c = 0; c < 4; ++c) {
            Vec p = {double(f & 1), double((f >> 1) & 1), (c & 1) ? fb.hi[0] : fb.lo[0],
                     (c & 2) ? fb.hi[1] : fb.lo[1]};
            for (const Halfspace& h : st.recorded) CHECK(h.contains(p, 1e-7));
        }
    }
}

TEST_CASE("adversary: certificate before any query") {
    AdversaryState st = make_adversary(1, 1, 8.0, 1.0);
    auto [c1, c2] = adversary_certificate(st, 0.01);
    CHECK(adversary_replay_consistent(st, c1));
    CHECK(adversary_replay_consistent(st, c2));
    // Disjoint mixed-integer parts: no integer-x point in both hulls.
    for (double x : {0.0, 1.0})
        for (double y = 0.0; y <= 8.0; y += 0.05) {
            bool in1 = body_contains(c1, {x, y}, 1e-9);
            bool in2 = body_contains(c2, {x, y}, 1e-9);
            CHECK_FALSE((in1 && in2));
        }
}

TEST_CASE("adversary: budget accounting") {
    AdversaryState st = make_adversary(1, 1, 8.0, 0.125);
    // cap per fiber = log2(8 / 0.375) = 4.415..., budget = floor(2 * cap) = 8.
    CHECK(st.per_fiber_cap() == doctest::Approx(std::log2(8.0 / 0.375)));
    CHECK(st.budget() == 8);
}

TEST_CASE("adversary match: strategies stay within budget and stay certifiable") {
    for (auto strat : {MatchStrategy::Centerpoint, MatchStrategy::Bisection,
                       MatchStrategy::Random}) {
        AdversaryState st = make_adversary(1, 2, 8.0, 0.125);
        long target = st.budget() - 1;
        run_adversary_match(st, strat, 123, target);
        CHECK(st.counted_queries <= target);
        auto [c1, c2] = adversary_certificate(st, 0.01);
        CHECK(adversary_replay_consistent(st, c1));
        CHECK(adversary_replay_consistent(st, c2));
    }
}

TEST_CASE("adversary match CSV is deterministic") {
    auto play = [] {
        AdversaryState st = make_adversary(2, 1, 8.0, 0.125);
        run_adversary_match(st, MatchStrategy::Random, 77, st.budget() - 1);
        return adversary_match_csv(st);
    };
    CHECK(play() == play());
}

TEST_CASE("mixed_integer_volume basics") {
    auto strip = ConvexBodySpec::box({0.0, 0.0}, {1.0, 1.0});
    CHECK(mixed_integer_volume(strip, 1, 1) == doctest::Approx(2.0));

    auto box = ConvexBodySpec::box({-1.5, -1.5}, {1.5, 1.5});
    CHECK(mixed_integer_volume(box, 2, 0) == doctest::Approx(9.0));

    auto ball = ConvexBodySpec::ball({0.0, 0.0}, 1.2);
    double expect = 2.0 * 2.0 * std::sqrt(1.2 * 1.2 - 1.0) + 2.0 * 1.2;
    CHECK(mixed_integer_volume(ball, 1, 1) == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("parallel and serial volume agree bit for bit") {
    auto body = ConvexBodySpec::intersection(
        {ConvexBodySpec::box({-2.0, -2.0, -2.0}, {2.0, 2.0, 2.0}),
         ConvexBodySpec::ball({0.3, -0.2, 0.1}, 1.8)});
    CHECK(mixed_integer_volume(body, 1, 2) == mixed_integer_volume_serial(body, 1, 2));

    CenterpointEstimate a = approx_centerpoint(body, 1, 2, 7);
    CenterpointEstimate b = approx_centerpoint_serial(body, 1, 2, 7);
    CHECK(a.h == b.h);
    CHECK(a.point == b.point);
}

TEST_CASE("mixed_integer_volume rejects unbounded bodies") {
    auto half = ConvexBodySpec::polyhedron({Halfspace({1.0, 0.0}, 1.0)});
    CHECK_THROWS_AS((void)mixed_integer_volume(half, 1, 1), InputError);
}

TEST_CASE("approx_centerpoint: interval midpoint") {
    auto seg = ConvexBodySpec::box({0.0}, {1.0});
    CenterpointEstimate est = approx_centerpoint(seg, 0, 1, 41);
    CHECK(est.nu == doctest::Approx(1.0));
    CHECK(est.point[0] == doctest::Approx(0.5).epsilon(0.03));
    CHECK(est.h == doctest::Approx(0.5).epsilon(0.03));
}

TEST_CASE("approx_centerpoint: Gruenbaum triangle") {
    auto tri = ConvexBodySpec::polyhedron(
        {Halfspace({-1.0, 0.0}, 0.0), Halfspace({0.0, -1.0}, 0.0), Halfspace({1.0, 1.0}, 1.0)});
    CenterpointEstimate est = approx_centerpoint(tri, 0, 2, 33);
    CHECK(est.nu == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(est.h >= (4.0 / 9.0) * est.nu - 0.02 * est.nu);
}

TEST_CASE("approx_centerpoint: two-fiber body") {
    auto strip = ConvexBodySpec::box({0.0, 0.0}, {1.0, 1.0});
    CenterpointEstimate est = approx_centerpoint(strip, 1, 1, 41);
    CHECK(est.nu == doctest::Approx(2.0));
    CHECK(est.h >= 0.25 * est.nu - 0.02 * est.nu);
}

TEST_CASE("approx_centerpoint scale cap") {
    auto b = ConvexBodySpec::box(Vec(4, 0.0), Vec(4, 1.0));
    CHECK_THROWS_AS((void)approx_centerpoint(b, 2, 2, 9), CapabilityError);
}

TEST_CASE("centerpoint_bound values") {
    CHECK(centerpoint_bound(0, 1) == doctest::Approx(0.5));
    CHECK(centerpoint_bound(0, 2) == doctest::Approx(4.0 / 9.0));
    CHECK(centerpoint_bound(1, 1) == doctest::Approx(0.25));
    CHECK(centerpoint_bound(2, 2) == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("centerpoint strategy: 1-d bisection flavor") {
    ProblemParameters p;
    p.n = 0;
    p.d = 1;
    p.R = 8.0;
    p.M = 1.0;
    p.rho = 1.0;
    p.eps = 0.5;
    p.delta = 1e-3;
    auto body = ConvexBodySpec::box({-8.0}, {8.0});
    auto [r, count] = centerpoint_strategy_run(body, ObjectiveSpec::linear({1.0}), p, 41);
    REQUIRE(r.found());
    CHECK(r.value <= -8.0 + 1.0);
    double b = 2.0;
    double cap = 2.0 * std::log(p.M * (2.0 * p.R + 1.0) * (2.0 * p.R + 1.0) / (p.rho * p.eps)) /
                     std::log(b) +
                 2.0;
    CHECK(static_cast<double>(count) <= cap);
}

TEST_CASE("centerpoint strategy: constant objective stops at first Inside") {
    ProblemParameters p;
    p.n = 1;
    p.d = 1;
    p.R = 4.0;
    p.M = 1.0;
    p.rho = 1.0;
    p.eps = 0.5;
    p.delta = 1e-3;
    auto body = ConvexBodySpec::ball({0.0, 0.0}, 4.0);
    auto [r, count] = centerpoint_strategy_run(body, ObjectiveSpec::constant(0.0), p, 17);
    REQUIRE(r.found());
    CHECK(body_contains(body, r.point->coords, 1e-6));
}
