#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>

#include "doctest.h"
#include "mico/core.hpp"

using namespace mico;

namespace {

Vec random_in(std::mt19937_64& rng, const Vec& lo, const Vec& hi) {
    Vec z(lo.size());
    for (std::size_t i = 0; i < z.size(); ++i)
        z[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    return z;
}

}  // namespace

TEST_CASE("ball separation basics") {
    auto ball = ConvexBodySpec::ball({0.0, 0.0}, 1.0);
    CHECK(query_separation(ball, Point({0.0, 0.0})).inside());

    OracleAnswer out = query_separation(ball, Point({2.0, 0.0}));
    REQUIRE_FALSE(out.inside());
    CHECK(out.separator->normal[0] == doctest::Approx(1.0));
    CHECK(out.separator->normal[1] == doctest::Approx(0.0));
    CHECK(out.separator->offset == doctest::Approx(1.0));
}

TEST_CASE("polyhedron separation returns the violated row, unit normalized") {
    auto poly = ConvexBodySpec::polyhedron({Halfspace({1.0, 1.0}, 1.0)});
    OracleAnswer out = query_separation(poly, Point({1.0, 1.0}));
    REQUIRE_FALSE(out.inside());
    const double s = std::sqrt(0.5);
    CHECK(out.separator->normal[0] == doctest::Approx(s));
    CHECK(out.separator->normal[1] == doctest::Approx(s));
    CHECK(out.separator->offset == doctest::Approx(s));
}

TEST_CASE("separator normals have unit Euclidean norm") {
    std::mt19937_64 rng(3);
    std::vector<ConvexBodySpec> bodies = {
        ConvexBodySpec::ball({0.2, -0.1}, 0.7),
        ConvexBodySpec::ball({0.0, 0.0}, 0.5, Norm::Sup),
        ConvexBodySpec::box({-1.0, 0.0}, {1.0, 2.0}),
        ConvexBodySpec::polyhedron({Halfspace({2.0, 1.0}, 1.0), Halfspace({-1.0, 3.0}, 2.0)}),
        ConvexBodySpec::hull({{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}}),
    };
    for (const auto& b : bodies)
        for (int it = 0; it < 100; ++it) {
            Vec z = random_in(rng, {-3.0, -3.0}, {3.0, 3.0});
            OracleAnswer out = query_separation(b, Point(z));
            if (out.inside()) continue;
            CHECK(norm2(out.separator->normal) == doctest::Approx(1.0));
            CHECK(dot(out.separator->normal, z) > out.separator->offset);
        }
}

TEST_CASE("separation soundness against sampled inside points") {
    std::mt19937_64 rng(5);
    std::vector<ConvexBodySpec> bodies = {
        ConvexBodySpec::ball({0.2, -0.1}, 0.7),
        ConvexBodySpec::box({-1.0, 0.0}, {1.0, 2.0}),
        ConvexBodySpec::polyhedron({Halfspace({1.0, 0.0}, 1.0), Halfspace({0.0, 1.0}, 1.0),
                                    Halfspace({-1.0, -1.0}, 1.0)}),
        ConvexBodySpec::intersection(
            {ConvexBodySpec::ball({0.0, 0.0}, 1.5), ConvexBodySpec::box({-1.0, -1.0}, {1.0, 1.0})}),
        ConvexBodySpec::hull({{0.0, 0.0}, {1.0, 0.0}, {0.5, 1.0}}),
    };
    for (const auto& b : bodies) {
        // Collect 1e3 verified-inside samples, then check every separator
        // emitted for random outside queries keeps all of them.
        std::vector<Vec> inside;
        while (inside.size() < 1000) {
            Vec z = random_in(rng, {-2.0, -2.0}, {2.0, 2.0});
            if (body_contains(b, z, 0.0)) inside.push_back(std::move(z));
        }
        for (int it = 0; it < 200; ++it) {
            Vec z = random_in(rng, {-4.0, -4.0}, {4.0, 4.0});
            OracleAnswer out = query_separation(b, Point(z));
            if (out.inside()) continue;
            for (const Vec& p : inside) CHECK(out.separator->contains(p, 1e-9));
        }
    }
}

TEST_CASE("first order answers") {
    FirstOrderAnswer lin = query_first_order(ObjectiveSpec::linear({1.0, 2.0}), Point({3.0, 4.0}));
    CHECK(lin.value == doctest::Approx(11.0));
    CHECK(lin.subgradient == Vec{1.0, 2.0});

    auto ma = ObjectiveSpec::max_affine({{{1.0}, 0.0}, {{-1.0}, 0.0}});
    FirstOrderAnswer tie = query_first_order(ma, Point({0.0}));
    CHECK(tie.value == doctest::Approx(0.0));
    CHECK(tie.subgradient == Vec{1.0});  // lowest maximizing piece wins the tie

    Matrix q(1, 1);
    q(0, 0) = 2.0;
    FirstOrderAnswer quad = query_first_order(ObjectiveSpec::quadratic(q, {0.0}), Point({2.0}));
    CHECK(quad.value == doctest::Approx(4.0));
    CHECK(quad.subgradient[0] == doctest::Approx(4.0));
}

TEST_CASE("subgradient inequality on random pairs") {
    std::mt19937_64 rng(7);
    Matrix q(2, 2);
    q(0, 0) = 2.0;
    q(0, 1) = 0.5;
    q(1, 0) = 0.5;
    q(1, 1) = 1.0;
    std::vector<ObjectiveSpec> objs = {
        ObjectiveSpec::linear({1.5, -2.0}),
        ObjectiveSpec::max_affine({{{1.0, 0.0}, 0.0}, {{-1.0, 0.5}, 0.3}, {{0.0, -1.0}, -0.2}}),
        ObjectiveSpec::quadratic(q, {0.3, -0.1}),
        ObjectiveSpec::constant(4.2),
    };
    for (const auto& f : objs)
        for (int it = 0; it < 1000; ++it) {
            Vec z = random_in(rng, {-3.0, -3.0}, {3.0, 3.0});
            Vec w = random_in(rng, {-3.0, -3.0}, {3.0, 3.0});
            FirstOrderAnswer at = query_first_order(f, Point(z));
            CHECK(objective_value(f, w) >= at.value + dot(at.subgradient, w - z) - 1e-9);
            CHECK(objective_value(f, z) == doctest::Approx(at.value));
        }
}

TEST_CASE("oracle determinism") {
    auto body = ConvexBodySpec::intersection(
        {ConvexBodySpec::ball({0.3, 0.1}, 1.2), ConvexBodySpec::box({-1.0, -1.0}, {1.0, 1.0})});
    std::mt19937_64 rng(9);
    for (int it = 0; it < 200; ++it) {
        Vec z = random_in(rng, {-3.0, -3.0}, {3.0, 3.0});
        OracleAnswer a = query_separation(body, Point(z));
        OracleAnswer b = query_separation(body, Point(z));
        CHECK(a.inside() == b.inside());
        if (!a.inside()) {
            CHECK(a.separator->normal == b.separator->normal);
            CHECK(a.separator->offset == b.separator->offset);
        }
    }
}

TEST_CASE("dimension mismatch is rejected") {
    auto ball = ConvexBodySpec::ball({0.0, 0.0}, 1.0);
    CHECK_THROWS_AS((void)query_separation(ball, Point({0.0})), InputError);
}

TEST_CASE("bounding boxes") {
    auto [blo, bhi] = bounding_box(ConvexBodySpec::ball({1.0, 2.0}, 0.5));
    CHECK(blo[0] == doctest::Approx(0.5));
    CHECK(bhi[1] == doctest::Approx(2.5));

    auto [plo, phi] = bounding_box(ConvexBodySpec::polyhedron(
        {Halfspace({1.0, 0.0}, 2.0), Halfspace({-1.0, 0.0}, 0.0), Halfspace({0.0, 1.0}, 3.0),
         Halfspace({0.0, -1.0}, 1.0)}));
    CHECK(plo[0] == doctest::Approx(0.0));
    CHECK(phi[0] == doctest::Approx(2.0));
    CHECK(plo[1] == doctest::Approx(-1.0));
    CHECK(phi[1] == doctest::Approx(3.0));
}

TEST_CASE("euclidean depth") {
    auto ball = ConvexBodySpec::ball({0.0, 0.0}, 1.0);
    CHECK(euclidean_depth(ball, {0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(euclidean_depth(ball, {0.5, 0.0}) == doctest::Approx(0.5));
    CHECK(euclidean_depth(ball, {2.0, 0.0}) == doctest::Approx(-1.0));

    auto box = ConvexBodySpec::box({0.0, 0.0}, {2.0, 4.0});
    CHECK(euclidean_depth(box, {1.0, 2.0}) == doctest::Approx(1.0));
    auto both = ConvexBodySpec::intersection({ball, box});
    CHECK(euclidean_depth(both, {0.3, 0.3}) == doctest::Approx(0.3));
}

TEST_CASE("transcript append and truncate") {
    Transcript t;
    TranscriptEntry e;
    e.query = Point({1.0});
    e.kind = QueryKind::Separation;
    e.answer = OracleAnswer::make_inside();
    Transcript t1 = transcript_append(t, e);
    CHECK(t.size() == 0);
    CHECK(t1.size() == 1);
    Transcript t3 = transcript_append(transcript_append(t1, e), e);
    CHECK(t3.truncate(2).size() == 2);
    CHECK(t3.truncate(0).size() == 0);

    // Replay against the generating instance reproduces every answer.
    auto ball = ConvexBodySpec::ball({0.0}, 2.0);
    std::mt19937_64 rng(1);
    Transcript rec;
    for (int it = 0; it < 50; ++it) {
        Point z({std::uniform_real_distribution<double>(-4.0, 4.0)(rng)});
        TranscriptEntry en;
        en.query = z;
        en.answer = query_separation(ball, z);
        rec = transcript_append(rec, en);
    }
    for (const auto& en : rec.entries) {
        OracleAnswer again = query_separation(ball, en.query);
        const auto& prev = std::get<OracleAnswer>(en.answer);
        CHECK(again.inside() == prev.inside());
    }
}
