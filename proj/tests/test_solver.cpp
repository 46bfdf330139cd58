#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "mico/solver.hpp"

using namespace mico;

namespace {

ProblemParameters params(int n, int d, double R, double M, double rho, double eps, double delta) {
    ProblemParameters p;
    p.n = n;
    p.d = d;
    p.R = R;
    p.M = M;
    p.rho = rho;
    p.eps = eps;
    p.delta = delta;
    return p;
}

bool integral_prefix(const Point& z, int n) {
    for (int i = 0; i < n; ++i)
        if (z[i] != std::llround(z[i])) return false;
    return true;
}

}  // namespace

TEST_CASE("feasibility: off-fiber ball has no deep point") {
    auto body = ConvexBodySpec::ball({0.5, 0.0}, 0.4);
    auto r = feasibility(body, params(1, 1, 2.0, 1.0, 0.5, 0.0, 0.05));
    CHECK_FALSE(r.found());
}

TEST_CASE("feasibility: integer box") {
    auto body = ConvexBodySpec::box({-1.2, -1.2}, {1.2, 1.2});
    auto r = feasibility(body, params(2, 0, 2.0, 1.0, 1.0, 0.0, 0.05));
    REQUIRE(r.found());
    CHECK(integral_prefix(*r.point, 2));
    for (int i = 0; i < 2; ++i) CHECK(std::abs((*r.point)[i]) <= 1.0);
    CHECK(query_separation(body, *r.point).inside());
}

TEST_CASE("feasibility: big mixed ball") {
    auto body = ConvexBodySpec::ball({0.0, 0.0, 0.0, 0.0}, 10.0);
    auto r = feasibility(body, params(2, 2, 10.0, 1.0, 1.0, 0.0, 0.1));
    REQUIRE(r.found());
    CHECK(integral_prefix(*r.point, 2));
    CHECK(query_separation(body, *r.point).inside());
}

TEST_CASE("optimize: continuous linear over ball") {
    Vec c = {0.6, -0.8};
    auto body = ConvexBodySpec::ball({0.0, 0.0}, 2.0);
    auto r = optimize(body, ObjectiveSpec::linear(c), params(0, 2, 2.0, 1.0, 1.0, 0.01, 1e-3));
    REQUIRE(r.found());
    CHECK(r.value <= -2.0 + 0.01);
    CHECK(r.value >= -2.0 - 1e-9);
    CHECK(r.stats.feasibility_calls <= static_cast<long>(
                                           std::ceil(std::log2(4.0 * 1.0 * 2.0 / 0.01))));
}

TEST_CASE("optimize: pure integer disk") {
    auto body = ConvexBodySpec::ball({0.0, 0.0}, 1.6);
    auto r = optimize(body, ObjectiveSpec::linear({-1.0, -1.0}),
                      params(2, 0, 1.6, std::sqrt(2.0), 1.0, 0.01, 1e-3));
    REQUIRE(r.found());
    CHECK(integral_prefix(*r.point, 2));
    CHECK(r.value == doctest::Approx(-2.0).epsilon(1e-9));
}

TEST_CASE("optimize: mixed ball, minimize the continuous coordinate") {
    auto body = ConvexBodySpec::ball({0.0, 0.0}, 1.5);
    auto r = optimize(body, ObjectiveSpec::linear({0.0, 1.0}),
                      params(1, 1, 1.5, 1.0, 0.1, 0.05, 1e-3));
    REQUIRE(r.found());
    CHECK((*r.point)[0] == 0.0);
    CHECK(r.value <= -1.5 + 0.05);
    CHECK(r.value >= -1.5 - 1e-9);
}

TEST_CASE("optimize_single_pass matches optimize within eps") {
    auto ball2 = ConvexBodySpec::ball({0.0, 0.0}, 2.0);
    auto a = optimize_single_pass(ball2, ObjectiveSpec::linear({0.6, -0.8}),
                                  params(0, 2, 2.0, 1.0, 1.0, 0.01, 1e-3));
    REQUIRE(a.found());
    CHECK(a.value <= -2.0 + 0.01);

    auto disk = ConvexBodySpec::ball({0.0, 0.0}, 1.6);
    auto b = optimize_single_pass(disk, ObjectiveSpec::linear({-1.0, -1.0}),
                                  params(2, 0, 1.6, std::sqrt(2.0), 1.0, 0.01, 1e-3));
    REQUIRE(b.found());
    CHECK(b.value == doctest::Approx(-2.0).epsilon(1e-9));

    auto mixed = ConvexBodySpec::ball({0.0, 0.0}, 1.5);
    ProblemParameters pm = params(1, 1, 1.5, 1.0, 0.1, 0.05, 1e-3);
    auto c = optimize_single_pass(mixed, ObjectiveSpec::linear({0.0, 1.0}), pm);
    REQUIRE(c.found());
    CHECK(c.value <= -1.5 + 0.05);

    // One pass never re-runs the recursion, so it visits one root node.
    CHECK(c.stats.recursion_nodes >= 1);
    CHECK(c.stats.feasibility_calls == 0);
}

TEST_CASE("optimize_single_pass: constant objective returns a feasible point") {
    auto body = ConvexBodySpec::ball({0.0, 0.0}, 1.5);
    auto r = optimize_single_pass(body, ObjectiveSpec::constant(3.0),
                                  params(1, 1, 1.5, 1.0, 0.5, 0.1, 1e-3));
    REQUIRE(r.found());
    CHECK(r.value == doctest::Approx(3.0));
    CHECK(query_separation(body, *r.point).inside());
}

TEST_CASE("ellipsoid_continuous examples") {
    auto r1 = ellipsoid_continuous(ConvexBodySpec::ball({0.0, 0.0}, 1.0),
                                   ObjectiveSpec::linear({3.0, 4.0}),
                                   params(0, 2, 1.0, 5.0, 1.0, 1e-3, 1e-3));
    REQUIRE(r1.found());
    CHECK(r1.value == doctest::Approx(-5.0).epsilon(1e-3));

    auto abs_sum = ObjectiveSpec::max_affine({{{1.0, 1.0}, 0.0},
                                              {{1.0, -1.0}, 0.0},
                                              {{-1.0, 1.0}, 0.0},
                                              {{-1.0, -1.0}, 0.0}});
    auto r2 = ellipsoid_continuous(ConvexBodySpec::box({-1.0, -1.0}, {1.0, 1.0}), abs_sum,
                                   params(0, 2, 2.0, 2.0, 1.0, 1e-3, 1e-3));
    REQUIRE(r2.found());
    CHECK(std::abs(r2.value) <= 1e-3);

    // f = (1/2)||z||^2 - <a, z>, minimized at a with value -||a||^2/2.
    Vec a = {0.3, 0.7};
    auto r3 = ellipsoid_continuous(ConvexBodySpec::ball({0.0, 0.0}, 2.0),
                                   ObjectiveSpec::quadratic(Matrix::identity(2), -1.0 * a),
                                   params(0, 2, 2.0, 3.0, 1.0, 1e-3, 1e-3));
    REQUIRE(r3.found());
    CHECK(r3.value == doctest::Approx(-0.5 * dot(a, a)).epsilon(1e-3));
}

TEST_CASE("ellipsoid_continuous requires n = 0") {
    CHECK_THROWS_AS((void)ellipsoid_continuous(ConvexBodySpec::ball({0.0, 0.0}, 1.0),
                                               ObjectiveSpec::linear({1.0, 0.0}),
                                               params(1, 1, 1.0, 1.0, 1.0, 1e-3, 1e-3)),
                    InputError);
}

TEST_CASE("pure_integer_optimize examples") {
    auto empty = pure_integer_optimize(ConvexBodySpec::ball({0.5, 0.5}, 0.3),
                                       ObjectiveSpec::constant(0.0),
                                       params(2, 0, 2.0, 0.0, 1.0, 0.0, 1e-3));
    CHECK_FALSE(empty.found());

    auto body = ConvexBodySpec::intersection(
        {ConvexBodySpec::polyhedron({Halfspace({1.0, 1.0}, 3.0), Halfspace({-1.0, 0.0}, 0.0),
                                     Halfspace({0.0, -1.0}, 0.0)}),
         ConvexBodySpec::ball({0.0, 0.0}, 10.0)});
    auto r = pure_integer_optimize(body, ObjectiveSpec::linear({-1.0, -2.0}),
                                   params(2, 0, 10.0, 0.0, 1.0, 0.0, 1e-3));
    REQUIRE(r.found());
    CHECK(r.value == doctest::Approx(-6.0).epsilon(1e-12));

    auto box = pure_integer_optimize(ConvexBodySpec::box({-2.5, -2.5}, {2.5, 2.5}),
                                     ObjectiveSpec::constant(1.0),
                                     params(2, 0, 4.0, 0.0, 1.0, 0.0, 1e-3));
    REQUIRE(box.found());
    CHECK(integral_prefix(*box.point, 2));
    for (int i = 0; i < 2; ++i) CHECK(std::abs((*box.point)[i]) <= 2.0);
}

TEST_CASE("pure_integer_optimize requires d = 0") {
    CHECK_THROWS_AS((void)pure_integer_optimize(ConvexBodySpec::ball({0.0, 0.0}, 1.0),
                                                ObjectiveSpec::constant(0.0),
                                                params(1, 1, 1.0, 0.0, 1.0, 0.0, 1e-3)),
                    InputError);
}

TEST_CASE("stats are coherent") {
    auto body = ConvexBodySpec::ball({0.0, 0.0}, 1.6);
    auto r = optimize(body, ObjectiveSpec::linear({-1.0, -1.0}),
                      params(2, 0, 1.6, std::sqrt(2.0), 1.0, 0.01, 1e-3));
    CHECK(r.stats.separation_queries >= r.stats.ellipsoid_updates);
    CHECK(r.stats.recursion_nodes >= 1);
    CHECK(r.stats.wall_ms >= 0.0);
}
