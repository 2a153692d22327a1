#include "mixhess/errors.hpp"
#include "mixhess/gop.hpp"

#include <doctest.h>

#include <random>

using namespace mixhess;
using doctest::Approx;

namespace {

HermitianMatrix diag(std::initializer_list<double> d) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(d.size()));
    int i = 0;
    for (double x : d) v(i++) = x;
    return HermitianMatrix{v.asDiagonal()};
}

}  // namespace

TEST_CASE("operator values") {
    const std::vector<double> a1{1.0, 0.0};
    const std::vector<double> a2{2.0, 0.0};
    CHECK(g_value(2, a1, Spectrum{1, 1}) == Approx(0.0));
    CHECK(g_value(2, a2, Spectrum{2, 2}) == Approx(0.5));
    CHECK(g_value(2, a2, diag({2, 2})) == Approx(0.5));
    CHECK_THROWS_AS(g_value(3, a1, Spectrum{1, 1}), ArgumentError);
}

TEST_CASE("gradient at a diagonal point") {
    const std::vector<double> a{2.0, 0.0};
    const auto jet = g_jet(2, a, diag({2, 2}));
    CHECK(jet.value == Approx(0.5));
    Eigen::MatrixXcd expected = Eigen::MatrixXcd::Identity(2, 2) * 0.375;
    CHECK((jet.gradient.entries - expected).norm() < 1e-14);
    const auto t = trace_values(2, a, jet.eig);
    CHECK(t.trace == Approx(0.75));
    CHECK(t.weighted == Approx(1.5));
}

TEST_CASE("gradient matches finite differences") {
    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    const std::vector<double> a{0.7, 0.3, 0.0};
    const int n = 3, k = 3;
    for (int rep = 0; rep < 10; ++rep) {
        Eigen::MatrixXcd m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = cplx(0.3 * nd(rng), 0.3 * nd(rng));
        const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint()) + 3.0 * Eigen::MatrixXcd::Identity(n, n);
        const auto jet = g_jet(k, a, HermitianMatrix{h});
        const double step = 1e-5;
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j)
                for (cplx w : {cplx(1, 0), cplx(0, 1)}) {
                    if (i == j && w.imag() != 0.0) continue;
                    Eigen::MatrixXcd e = Eigen::MatrixXcd::Zero(n, n);
                    e(i, j) += w;
                    e(j, i) += std::conj(w);
                    const double fd = (g_value(k, a, HermitianMatrix{h + step * e}) -
                                       g_value(k, a, HermitianMatrix{h - step * e})) /
                                      (2 * step);
                    const double an = (jet.gradient.entries * e).trace().real();
                    CHECK(std::abs(fd - an) <= 1e-6 * (1.0 + std::abs(an)));
                }
    }
}

TEST_CASE("real form reproduces the first variation in real coordinates") {
    // tr(G E) for E the complex Hessian of a real quadratic form q equals
    // sum A_ab D_ab q with A the real form.
    std::mt19937_64 rng(8);
    std::normal_distribution<double> nd;
    const int n = 2;
    Eigen::MatrixXcd g(n, n);
    g << 0.7, cplx(0.1, 0.2), cplx(0.1, -0.2), 0.4;
    const auto a = real_form(HermitianMatrix{g});
    for (int rep = 0; rep < 5; ++rep) {
        Eigen::MatrixXd q(2 * n, 2 * n);
        for (int i = 0; i < 2 * n; ++i)
            for (int j = 0; j < 2 * n; ++j) q(i, j) = nd(rng);
        q = 0.5 * (q + q.transpose()).eval();
        const auto e = to_complex_hessian(RealHessian{q}).entries;
        CHECK((g * e).trace().real() == Approx((a.cwiseProduct(q)).sum()).epsilon(1e-12));
    }
}

TEST_CASE("ratio bounds") {
    const std::vector<double> inf{1.0, 1.0};
    const auto b = ratio_bounds(2, 2, inf, 2.0);
    CHECK(b.lower == Approx(1.0));
    CHECK(b.c_nk == Approx(1.0));
    CHECK(b.upper == Approx(2.0));
    REQUIRE(b.ratio_uppers.size() == 1);
    CHECK(b.ratio_uppers[0] == Approx(1.0));
    const std::vector<double> bad{1.0, 0.0};
    CHECK_THROWS_AS(ratio_bounds(2, 2, bad, 2.0), ArgumentError);
}

TEST_CASE("concavity probe") {
    const std::vector<double> a{1.0, 0.0};
    const HermitianMatrix i2{Eigen::MatrixXcd::Identity(2, 2)};
    const HermitianMatrix two{2.0 * Eigen::MatrixXcd::Identity(2, 2)};
    CHECK(concavity_probe(2, a, i2, two) == Approx(1.0 / 24.0));
}
