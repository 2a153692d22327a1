#include "mixhess/errors.hpp"
#include "mixhess/geom.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace mixhess;
using doctest::Approx;

TEST_CASE("ball defining function") {
    const auto b = DomainSpec::ball(2, 1.0);
    const std::vector<double> on{0.6, 0.0, 0.8, 0.0};
    auto v = defining_function(b, on);
    CHECK(v.r == Approx(0.0));
    double norm = 0.0;
    for (double x : v.normal) norm += x * x;
    CHECK(std::sqrt(norm) == Approx(1.0));
    CHECK(v.normal[0] == Approx(0.6));
    const std::vector<double> origin(4, 0.0);
    CHECK(defining_function(b, origin).r == Approx(-1.0));
}

TEST_CASE("ellipsoid defining function and projection") {
    const auto e = DomainSpec::ellipsoid(2, {1, 1, 1, 2});
    const std::vector<double> p{0, 0, 0, 2};
    const auto v = defining_function(e, p);
    CHECK(v.r == Approx(0.0).epsilon(1e-15));
    CHECK(v.normal[3] == Approx(1.0));
    CHECK(std::abs(v.normal[0]) < 1e-15);

    const std::vector<double> inside{0.2, -0.1, 0.3, 1.1};
    const auto foot = project_to_boundary(e, inside);
    CHECK(defining_function(e, foot.point).r == Approx(0.0).epsilon(1e-10));
    CHECK(foot.depth > 0.0);
    // the foot is the closest point: inside - foot is parallel to the normal
    double cross = 0.0;
    for (int a = 0; a < 4; ++a) {
        const double d = foot.point[a] - inside[a];
        cross += std::abs(d - foot.depth * foot.normal[a]);
    }
    CHECK(cross < 1e-9);
}

TEST_CASE("normal matches a finite-difference gradient") {
    const auto e = DomainSpec::ellipsoid(2, {1.0, 1.2, 0.9, 1.5});
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> ud(-1.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> t(4);
        for (int a = 0; a < 4; ++a) t[a] = 0.8 * e.semi_axis(a) * ud(rng);
        const auto v = defining_function(e, t);
        const double h = 1e-6;
        for (int a = 0; a < 4; ++a) {
            auto tp = t, tm = t;
            tp[a] += h;
            tm[a] -= h;
            const double fd = (defining_function(e, tp).r - defining_function(e, tm).r) / (2 * h);
            CHECK(fd == Approx(v.gradient[a]).epsilon(1e-6));
        }
    }
}

TEST_CASE("domain constants") {
    const auto b = DomainSpec::ball(2, 1.5);
    CHECK(b.kappa_min() == Approx(1.0 / 1.5));
    CHECK(b.diam() == Approx(3.0));
    const auto e = DomainSpec::ellipsoid(2, {1, 1, 1, 2});
    CHECK(e.diam() == Approx(4.0));
    CHECK(e.min_semi_axis() == 1.0);
    CHECK(e.max_semi_axis() == 2.0);
    CHECK_THROWS_AS(DomainSpec::ball(2, -1.0).validate(), ArgumentError);
}

TEST_CASE("grid classification") {
    const auto b = DomainSpec::ball(2, 1.0);
    const auto g = build_grid(b, 17, 1.2);
    CHECK(g.num_points() == 17LL * 17 * 17 * 17);
    const std::int64_t center = 8 * (g.stride(0) + g.stride(1) + g.stride(2) + g.stride(3));
    CHECK(g.classify(center) == PointClass::interior);
    CHECK(g.classify(0) == PointClass::exterior);
    CHECK(g.count(PointClass::interior) + g.count(PointClass::band) == g.num_unknowns());
    const double reach = std::sqrt(4.0) * g.spacing();
    for (const auto& bp : g.band()) {
        CHECK(bp.depth >= 0.0);
        CHECK(bp.depth <= reach);
        for (const auto& s : bp.samples) {
            double sum = 0.0;
            for (auto [u, w] : s.multilinear) {
                CHECK(w >= -1e-15);
                CHECK(u >= 0);
                sum += w;
            }
            CHECK(sum == Approx(1.0));
        }
    }
    // interior points have all stencil neighbours among the unknowns
    for (auto u : g.interior()) {
        const auto p = g.point_of(u);
        for (int a = 0; a < 4; ++a) {
            CHECK(g.classify(p + g.stride(a)) != PointClass::exterior);
            CHECK(g.classify(p - g.stride(a)) != PointClass::exterior);
        }
    }
}

TEST_CASE("band fraction decreases with refinement") {
    const auto b = DomainSpec::ball(2, 1.0);
    double last = 1e9;
    for (int N : {17, 25, 33}) {
        const auto g = build_grid(b, N, 1.2);
        const double ratio = double(g.count(PointClass::band)) / double(g.count(PointClass::interior));
        CHECK(ratio < last);
        last = ratio;
    }
}

TEST_CASE("grid argument checks") {
    const auto b = DomainSpec::ball(2, 1.0);
    CHECK_THROWS_AS(build_grid(b, 16, 1.2), ArgumentError);
    CHECK_THROWS_AS(build_grid(b, 7, 1.2), ArgumentError);
    CHECK_THROWS_AS(build_grid(b, 17, 0.9), ArgumentError);
}
