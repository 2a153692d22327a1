#include "mixhess/chess.hpp"
#include "mixhess/errors.hpp"

#include <doctest.h>

#include <random>

using namespace mixhess;
using doctest::Approx;

namespace {

// 2n x 2n real Hessian of a quadratic form given as a lambda on indices.
RealHessian quadratic(int n, std::initializer_list<std::tuple<int, int, double>> terms) {
    RealHessian d{Eigen::MatrixXd::Zero(2 * n, 2 * n)};
    for (auto [i, j, c] : terms) {
        d.entries(i, j) += c;
        if (i != j) d.entries(j, i) += c;
    }
    return d;
}

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = cplx(nd(rng), nd(rng));
    return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_CASE("complex Hessian of quadratics") {
    // |z_1|^2 = t_1^2 + t_3^2
    auto h = to_complex_hessian(quadratic(2, {{0, 0, 2.0}, {2, 2, 2.0}})).entries;
    CHECK(std::abs(h(0, 0) - 1.0) < 1e-15);
    CHECK(h.cwiseAbs().sum() == Approx(1.0));
    // Re z_1^2 = t_1^2 - t_3^2 is pluriharmonic
    h = to_complex_hessian(quadratic(2, {{0, 0, 2.0}, {2, 2, -2.0}})).entries;
    CHECK(h.cwiseAbs().maxCoeff() < 1e-15);
    // Re(z_1 conj z_2) = t_1 t_2 + t_3 t_4
    h = to_complex_hessian(quadratic(2, {{0, 1, 1.0}, {2, 3, 1.0}})).entries;
    CHECK(std::abs(h(0, 1) - 0.5) < 1e-15);
    CHECK(std::abs(h(1, 0) - 0.5) < 1e-15);
    CHECK(std::abs(h(0, 0)) < 1e-15);
    // Im(z_1 conj z_2) = t_3 t_2 - t_1 t_4 gives an imaginary off-diagonal
    h = to_complex_hessian(quadratic(2, {{2, 1, 1.0}, {0, 3, -1.0}})).entries;
    CHECK(std::abs(h(0, 1) - cplx(0.0, -0.5)) < 1e-15);
    CHECK(std::abs(h(1, 0) - std::conj(h(0, 1))) < 1e-15);
}

TEST_CASE("complex Hessian rejects asymmetric input") {
    RealHessian d{Eigen::MatrixXd::Zero(4, 4)};
    d.entries(0, 1) = 1.0;
    CHECK_THROWS_AS(to_complex_hessian(d), ArgumentError);
    RealHessian odd{Eigen::MatrixXd::Zero(3, 3)};
    CHECK_THROWS_AS(to_complex_hessian(odd), ArgumentError);
}

TEST_CASE("Hermitian eigenvalues") {
    Eigen::MatrixXcd d(2, 2);
    d << 3, 0, 0, 1;
    auto e = hermitian_eigen(HermitianMatrix{d});
    CHECK(e.lambda[0] == Approx(3.0));
    CHECK(e.lambda[1] == Approx(1.0));
    CHECK((e.vectors.cwiseAbs() - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);

    Eigen::MatrixXcd off(2, 2);
    off << 0, 0.5, 0.5, 0;
    e = hermitian_eigen(HermitianMatrix{off});
    CHECK(e.lambda[0] == Approx(0.5));
    CHECK(e.lambda[1] == Approx(-0.5));

    Eigen::MatrixXcd c(2, 2);
    c << 2, cplx(0, 1), cplx(0, -1), 2;
    e = hermitian_eigen(HermitianMatrix{c});
    CHECK(e.lambda[0] == Approx(3.0));
    CHECK(e.lambda[1] == Approx(1.0));
    CHECK(e.residual < 1e-13);
}

TEST_CASE("Hermitian eigen invariants on random matrices") {
    std::mt19937_64 rng(11);
    for (int n = 1; n <= 6; ++n)
        for (int rep = 0; rep < 20; ++rep) {
            const auto h = random_hermitian(n, rng);
            const auto e = hermitian_eigen(HermitianMatrix{h});
            double tr = 0.0, det = 1.0;
            for (int i = 0; i < n; ++i) {
                tr += e.lambda[i];
                det *= e.lambda[i];
                if (i > 0) CHECK(e.lambda[i - 1] >= e.lambda[i]);
            }
            const double scale = 1.0 + h.cwiseAbs().maxCoeff();
            CHECK(std::abs(tr - h.trace().real()) <= 1e-10 * scale * n);
            CHECK(std::abs(det - h.determinant().real()) <= 1e-10 * std::pow(scale, n));
            const Eigen::MatrixXcd u = e.vectors;
            CHECK((u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).norm() < 1e-12);
            CHECK(e.residual <= 1e-12 * scale);
        }
}

TEST_CASE("admissibility") {
    CHECK(admissible(2, HermitianMatrix{Eigen::MatrixXcd::Identity(2, 2)}, 0.0));
    Eigen::MatrixXcd h(2, 2);
    h << 1, 0.25, 0.25, 1;
    CHECK(admissible(2, HermitianMatrix{h}, 0.0));
    const HermitianMatrix zero{Eigen::MatrixXcd::Zero(2, 2)};
    CHECK(admissible(1, zero, 0.0));
    CHECK_FALSE(admissible(1, zero, 1e-12));
    Eigen::MatrixXcd indefinite(2, 2);
    indefinite << 1, 0, 0, -2;
    CHECK_FALSE(admissible(1, HermitianMatrix{indefinite}, 0.0));
}
