#include "mixhess/errors.hpp"
#include "mixhess/problems.hpp"
#include "mixhess/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace mixhess;
using doctest::Approx;

TEST_CASE("barrier constant") {
    const std::vector<double> sup{1.0, 1.0};
    const double a = compute_A(2, 2, sup);
    CHECK(a == Approx((1.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-9));
    CHECK(barrier_operator_value(2, 2, sup, a) >= 1.0 - 1e-9);
    // vanishing right-hand side: A -> sqrt(sup alpha_0) / 2
    const std::vector<double> small{1.0, 1e-12};
    CHECK(compute_A(2, 2, small) == Approx(0.5).epsilon(1e-6));
}

TEST_CASE("C0 constant") {
    const std::vector<double> sup{1.0, 1.0};
    const double a = (1.0 + std::sqrt(2.0)) / 2.0;
    CHECK(compute_M0(2, 2, sup, 1.0, 2.0) == Approx(1.0 + 8.0 * a).epsilon(1e-9));
    CHECK(compute_M0(2, 2, sup, 1.0, 2.0) == Approx(10.657).epsilon(1e-4));
}

TEST_CASE("estimates hold on the lifted radial oracle") {
    const auto p = radial_ball_problem(2, 2, 1.0, {1.0, 1.0}, 0.0, 0.1);
    auto grid = std::make_shared<const Grid>(build_grid(p.domain, 13, 1.2));
    const Discretization disc(grid, p);
    const auto profile = march(radial_oracle_problem(2, 2, 1.0, {1.0, 1.0}));
    const auto closure = radial_neumann(profile, 0.1, 0.0);
    const auto u = lift_to_grid(profile, closure.f0, grid);
    const auto r = check_field(u, disc);
    CHECK(r.all_ok());
    CHECK(r.first_failure().empty());
    CHECK_NOTHROW(enforce(r));
    CHECK(r.A_barrier == Approx((1.0 + std::sqrt(2.0)) / 2.0).epsilon(1e-8));
}

TEST_CASE("a non-admissible field fails verification") {
    const auto p = radial_ball_problem(2, 2, 1.0, {1.0, 1.0}, 0.0, 0.1);
    auto grid = std::make_shared<const Grid>(build_grid(p.domain, 9, 1.2));
    const Discretization disc(grid, p);
    const ScalarField u(grid, [](std::span<const double> t) { return -(t[0] * t[0] + t[1] * t[1]); });
    CHECK_THROWS_AS(enforce(check_field(u, disc)), Error);
}
