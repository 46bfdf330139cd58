#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "mico/geometry.hpp"
#include "mico/lattice.hpp"

using namespace mico;

namespace {

Matrix diag(const Vec& v) {
    Matrix m(v.size(), v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m(i, i) = v[i];
    return m;
}

PDMatrix random_pd(std::mt19937_64& rng, std::size_t k) {
    std::uniform_real_distribution<double> ur(-2.0, 2.0);
    Matrix b(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) b(i, j) = ur(rng);
    Matrix a = b.transpose().multiply(b);
    for (std::size_t i = 0; i < k; ++i) a(i, i) += 0.5;
    return PDMatrix(std::move(a));
}

double a_norm_sq(const PDMatrix& a, const Vec& w) { return dot(w, a.solve(w)); }

/// Brute force over the integer box ||w||_inf <= radius.
IntegerVector brute_svp(const PDMatrix& a, long radius) {
    const std::size_t k = a.order();
    IntegerVector best;
    double best_v = 0.0;
    std::vector<long> cur(k, -radius);
    for (;;) {
        bool zero = true;
        Vec w(k);
        for (std::size_t i = 0; i < k; ++i) {
            w[i] = static_cast<double>(cur[i]);
            if (cur[i] != 0) zero = false;
        }
        if (!zero) {
            double v = a_norm_sq(a, w);
            if (best.empty() || v < best_v) {
                best.assign(cur.begin(), cur.end());
                best_v = v;
            }
        }
        std::size_t i = 0;
        while (i < k && cur[i] == radius) cur[i++] = -radius;
        if (i == k) break;
        cur[i]++;
    }
    return best;
}

IntegerVector brute_cvp(const PDMatrix& a, const Vec& c, long radius) {
    const std::size_t k = a.order();
    IntegerVector best;
    double best_v = 0.0;
    std::vector<long> cur(k);
    std::vector<long> base(k);
    for (std::size_t i = 0; i < k; ++i) {
        base[i] = static_cast<long>(std::llround(c[i]));
        cur[i] = base[i] - radius;
    }
    for (;;) {
        Vec w(k);
        for (std::size_t i = 0; i < k; ++i) w[i] = static_cast<double>(cur[i]);
        double v = a_norm_sq(a, w - c);
        if (best.empty() || v < best_v) {
            best.assign(cur.begin(), cur.end());
            best_v = v;
        }
        std::size_t i = 0;
        while (i < k && cur[i] == base[i] + radius) {
            cur[i] = base[i] - radius;
            i++;
        }
        if (i == k) break;
        cur[i]++;
    }
    return best;
}

}  // namespace

TEST_CASE("svp basics") {
    IntegerVector w = svp(PDMatrix::identity(3));
    CHECK(a_norm_sq(PDMatrix::identity(3), {double(w[0]), double(w[1]), double(w[2])}) ==
          doctest::Approx(1.0));

    IntegerVector w2 = svp(PDMatrix(diag({1.0, 0.01})));
    CHECK(std::abs(w2[0]) == 1);
    CHECK(w2[1] == 0);
}

TEST_CASE("svp dimension cap") {
    CHECK_THROWS_AS((void)svp(PDMatrix::identity(9)), CapabilityError);
}

TEST_CASE("svp and cvp agree with brute force on random PD matrices") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> uc(-3.0, 3.0);
    for (int it = 0; it < 100; ++it) {
        std::size_t k = 1 + it % 3;
        PDMatrix a = random_pd(rng, k);

        IntegerVector ws = svp(a);
        IntegerVector wb = brute_svp(a, 25);
        Vec vs(ws.begin(), ws.end()), vb(wb.begin(), wb.end());
        CHECK(a_norm_sq(a, vs) == doctest::Approx(a_norm_sq(a, vb)).epsilon(1e-9));

        Vec c(k);
        for (auto& v : c) v = uc(rng);
        IntegerVector xs = cvp(a, c);
        IntegerVector xb = brute_cvp(a, c, 25);
        Vec us(xs.begin(), xs.end()), ub(xb.begin(), xb.end());
        CHECK(a_norm_sq(a, us - c) == doctest::Approx(a_norm_sq(a, ub - c)).epsilon(1e-9));
    }
}

TEST_CASE("cvp basics") {
    IntegerVector v = cvp(PDMatrix::identity(2), {0.4, 0.7});
    CHECK(v == IntegerVector{0, 1});
    IntegerVector vi = cvp(PDMatrix::identity(2), {3.0, -2.0});
    CHECK(vi == IntegerVector{3, -2});
}

TEST_CASE("flatness direction and width") {
    PDMatrix aproj(diag({100.0, 0.01}));
    IntegerVector w = flatness_direction(aproj);
    CHECK(w[0] == 0);
    CHECK(std::abs(w[1]) == 1);
    CHECK(ellipsoid_width(aproj, w) == doctest::Approx(0.2));

    // Sampled width of the ellipse along w matches the closed form.
    Ellipsoid e(Vec(2, 0.0), aproj);
    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < 20000; ++i) {
        double ang = 2.0 * 3.14159265358979 * i / 20000.0;
        Vec z = e.map_unit({std::cos(ang), std::sin(ang)});
        double t = z[0] * static_cast<double>(w[0]) + z[1] * static_cast<double>(w[1]);
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    CHECK(hi - lo == doctest::Approx(0.2).epsilon(1e-6));

    IntegerVector wi = flatness_direction(PDMatrix::identity(3));
    CHECK(ellipsoid_width(PDMatrix::identity(3), wi) == doctest::Approx(2.0));
}

TEST_CASE("flatness direction minimizes width among random integer directions") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> ui(-4, 4);
    Matrix a(2, 2);
    a(0, 0) = 30.0;
    a(0, 1) = 29.0;
    a(1, 0) = 29.0;
    a(1, 1) = 30.0;  // thin correlated ellipse
    PDMatrix ap(a);
    IntegerVector w = flatness_direction(ap);
    double width = ellipsoid_width(ap, w);
    for (int it = 0; it < 100; ++it) {
        IntegerVector u = {ui(rng), ui(rng)};
        if (u[0] == 0 && u[1] == 0) continue;
        CHECK(width <= ellipsoid_width(ap, u) + 1e-9);
    }
}

TEST_CASE("kernel_slice_basis examples") {
    auto s1 = kernel_slice_basis({1, 0}, 3);
    REQUIRE(s1.has_value());
    CHECK(s1->x0[0] * 1 + s1->x0[1] * 0 == 3);
    REQUIRE(s1->basis.size() == 1);
    CHECK(s1->basis[0][0] == 0);
    CHECK(std::abs(s1->basis[0][1]) == 1);

    CHECK_FALSE(kernel_slice_basis({2, 4}, 3).has_value());

    auto s3 = kernel_slice_basis({2, 3}, 1);
    REQUIRE(s3.has_value());
    CHECK(2 * s3->x0[0] + 3 * s3->x0[1] == 1);
    REQUIRE(s3->basis.size() == 1);
    CHECK(2 * s3->basis[0][0] + 3 * s3->basis[0][1] == 0);
    CHECK(std::gcd(std::abs(s3->basis[0][0]), std::abs(s3->basis[0][1])) == 1);
}

TEST_CASE("slice completeness round trip") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> uw(-6, 6);
    std::uniform_int_distribution<long> uz(-20, 20);
    int done = 0;
    while (done < 1000) {
        std::size_t k = 2 + static_cast<std::size_t>(done % 3);
        IntegerVector w(k);
        bool zero = true;
        for (auto& v : w) {
            v = uw(rng);
            if (v != 0) zero = false;
        }
        if (zero) continue;
        IntegerVector z(k);
        for (auto& v : z) v = uz(rng);
        long m = 0;
        for (std::size_t i = 0; i < k; ++i) m += w[i] * z[i];
        auto sb = kernel_slice_basis(w, m);
        REQUIRE(sb.has_value());
        // z - x0 must be an integer combination of the kernel basis: solve
        // the (k x (k-1)) system over the rationals and check integrality.
        Vec rhs(k);
        for (std::size_t i = 0; i < k; ++i)
            rhs[i] = static_cast<double>(z[i] - sb->x0[i]);
        Matrix b(k, k - 1);
        for (std::size_t j = 0; j + 1 < k; ++j)
            for (std::size_t i = 0; i < k; ++i)
                b(i, j) = static_cast<double>(sb->basis[j][i]);
        // Least squares via normal equations; exact solution exists.
        Matrix g = b.transpose().multiply(b);
        Vec bt = b.apply_transpose(rhs);
        Vec coef = solve_linear(g, bt);
        Vec back = b.apply(coef);
        for (std::size_t i = 0; i < k; ++i) CHECK(back[i] == doctest::Approx(rhs[i]).epsilon(1e-7));
        for (double c : coef) CHECK(std::abs(c - std::llround(c)) < 1e-6);
        done++;
    }
}

TEST_CASE("kernel_slice_basis rejects the zero direction") {
    CHECK_THROWS_AS((void)kernel_slice_basis({0, 0}, 1), InputError);
}
