#include "mixhess/disc.hpp"
#include "mixhess/errors.hpp"
#include "mixhess/problems.hpp"
#include "mixhess/radial.hpp"
#include "mixhess/verify.hpp"

#include <doctest.h>

#include <cmath>

using namespace mixhess;
using doctest::Approx;

namespace {

std::shared_ptr<const Grid> ball_grid(int N, double R = 1.0) {
    return std::make_shared<const Grid>(build_grid(DomainSpec::ball(2, R), N, 1.2));
}

double sq(std::span<const double> t) {
    double s = 0.0;
    for (double x : t) s += x * x;
    return s;
}

double max_abs_diff(const ScalarField& a, const ScalarField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.values().size(); ++i) m = std::max(m, std::abs(a.values()[i] - b.values()[i]));
    return m;
}

}  // namespace

TEST_CASE("polynomial helpers") {
    const std::vector<double> c{1.0, 2.0, 3.0};
    CHECK(eval_polynomial(c, 2.0) == Approx(17.0));
    const auto f = radial_polynomial({1.0, 1.0}, {0, 0, 0, 0});
    const std::vector<double> t{1, 0, 1, 0};
    CHECK(f(t) == Approx(3.0));
}

TEST_CASE("extrapolation to zero") {
    const std::vector<double> x{0.4, 0.2, 0.1};
    std::vector<double> y;
    for (double v : x) y.push_back(2.0 - 3.0 * v + 5.0 * v * v);
    CHECK(extrapolate_to_zero(x, y) == Approx(2.0));
}

TEST_CASE("quadratic barrier residual equals the closed form") {
    const auto p = radial_ball_problem(2, 2, 1.0, {1.0, 1.0}, 0.0, 0.5);
    auto grid = ball_grid(9);
    const Discretization disc(grid, p);
    const double a = 0.9;
    const ScalarField u(grid, [a](std::span<const double> t) { return a * sq(t); });
    // complex Hessian a I: G = a C_2^2/C_2^1 - alpha_0/(a C_2^1) = a/2 - 1/(2a)
    const double expected = a / 2.0 - 1.0 / (2.0 * a) - 1.0;
    const auto r = disc.residual(u);
    for (double v : r.interior) CHECK(v == Approx(expected).epsilon(1e-10));
}

TEST_CASE("boundary rows are exact for quadratics") {
    const auto p = radial_ball_problem(2, 2, 1.0, {1.0, 1.0}, 0.0, 0.5);
    auto grid = ball_grid(13);
    const Discretization disc(grid, p);
    const auto f = [](std::span<const double> t) { return 1.0 + t[0] - 0.5 * t[1] + t[0] * t[2] + 0.3 * t[3] * t[3]; };
    const ScalarField u(grid, f);
    for (std::size_t b = 0; b < grid->band().size(); b += 11) {
        const auto& bp = grid->band()[b];
        CHECK(disc.foot_value_row(b).apply(u.values()) == Approx(f(bp.foot)).epsilon(1e-10));
        // D_nu f + eps f at the foot
        const auto& x = bp.foot;
        const auto& nu = bp.normal;
        const double dnu = nu[0] * (1.0 + x[2]) + nu[1] * (-0.5) + nu[2] * x[0] + nu[3] * 0.6 * x[3];
        CHECK(disc.boundary_row(b).apply(u.values()) == Approx(dnu + 0.5 * f(x)).epsilon(1e-9));
        const double dnn = 2.0 * nu[0] * nu[2] + 0.6 * nu[3] * nu[3];
        CHECK(disc.normal_second_row(b).apply(u.values()) == Approx(dnn).epsilon(1e-9));
    }
}

TEST_CASE("manufactured truncation is second order in the interior") {
    const Manufactured m;
    double prev = 0.0;
    for (int N : {17, 33}) {
        auto grid = ball_grid(N);
        const Discretization disc(grid, m.problem(DomainSpec::ball(2, 1.0), 0.5));
        const ScalarField u(grid, [&](std::span<const double> t) { return m.value(t); });
        const double r = disc.residual(u).interior_max();
        if (N == 33) CHECK(std::log(prev / r) / std::log(2.0) >= 1.8);
        prev = r;
    }
}

TEST_CASE("manufactured coefficients") {
    const Manufactured m;
    const std::vector<double> t{0.3, -0.2, 0.1, 0.4};
    const auto h = to_complex_hessian(m.hessian(t));
    const auto e = hermitian_eigen(h);
    const std::vector<double> alpha{m.alpha0, m.alpha1(t)};
    CHECK(alpha[1] > 0.0);
    CHECK(g_value(2, alpha, e.lambda) == Approx(alpha[1]).epsilon(1e-12));
    // gradient against central differences
    const auto g = m.gradient(t);
    for (int a = 0; a < 4; ++a) {
        auto tp = t, tm = t;
        tp[a] += 1e-6;
        tm[a] -= 1e-6;
        CHECK((m.value(tp) - m.value(tm)) / 2e-6 == Approx(g[a]).epsilon(1e-7));
    }
}

TEST_CASE("Newton converges and the solution is unique") {
    const Manufactured m;
    auto grid = ball_grid(9);
    const Discretization disc(grid, m.problem(DomainSpec::ball(2, 1.0), 0.5));
    const auto r1 = newton_solve(disc, barrier_field(disc));
    CHECK(std::max(r1.interior_residual, r1.boundary_residual) <= 1e-9);
    CHECK(r1.margin > 0.0);
    const ScalarField start(grid, [&](std::span<const double> t) { return 3.0 * sq(t) + 1.0 + t[0]; });
    const auto r2 = newton_solve(disc, start);
    CHECK(max_abs_diff(r1.solution, r2.solution) <= 1e-8);
    CHECK(check_solution(r1, disc).all_ok());
}

TEST_CASE("Newton from the exact discrete solution takes no steps") {
    const auto p = radial_ball_problem(2, 2, 1.0, {1.0, 1.0}, 0.0, 0.1);
    auto grid = ball_grid(9);
    const Discretization disc(grid, p);
    const auto r = newton_solve(disc, barrier_field(disc));
    CHECK(r.iterations == 0);
}

TEST_CASE("Newton argument and admissibility errors") {
    const auto p = radial_ball_problem(2, 2, 1.0, {1.0, 1.0}, 0.0, 0.0);
    auto grid = ball_grid(9);
    const Discretization disc(grid, p);
    CHECK_THROWS_AS(newton_solve(disc, barrier_field(disc, false)), ArgumentError);
    const auto q = radial_ball_problem(2, 2, 1.0, {1.0, 1.0}, 0.0, 0.5);
    const Discretization d2(grid, q);
    const ScalarField bad(grid, [](std::span<const double> t) { return -sq(t); });
    CHECK_THROWS_AS(newton_solve(d2, bad), AdmissibilityError);
    CHECK_THROWS_AS(d2.residual(bad), AdmissibilityError);
}

TEST_CASE("continuation recovers the Neumann constant") {
    auto grid = ball_grid(9);
    const std::vector<double> schedule{0.4, 0.2, 0.1, 0.05};
    const auto p = radial_ball_problem(2, 2, 1.0, {1.0, 1.0}, 0.0, schedule.front());
    const auto r = continue_epsilon(p, grid, schedule);
    REQUIRE(r.complete());
    const auto oracle = radial_neumann(march(radial_oracle_problem(2, 2, 1.0, {1.0, 1.0})), 0.0, 0.0);
    CHECK(r.c == Approx(oracle.c).epsilon(1e-6));

    // shifting phi by delta shifts c by -delta and leaves v unchanged
    const double delta = 0.25;
    const auto q = radial_ball_problem(2, 2, 1.0, {1.0, 1.0}, delta, schedule.front());
    const auto s = continue_epsilon(q, grid, schedule);
    REQUIRE(s.complete());
    CHECK(s.c == Approx(r.c - delta).epsilon(1e-6));
    CHECK(max_abs_diff(r.v, s.v) <= 1e-6);
}

TEST_CASE("continuation rejects a non-decreasing schedule") {
    auto grid = ball_grid(9);
    const std::vector<double> schedule{0.1, 0.2};
    const auto p = radial_ball_problem(2, 2, 1.0, {1.0, 1.0}, 0.0, 0.1);
    CHECK_THROWS_AS(continue_epsilon(p, grid, schedule), ArgumentError);
}
