#include "mixhess/gop.hpp"

#include "mixhess/errors.hpp"

#include <algorithm>
#include <cmath>

namespace mixhess {

namespace {

void check_k(int k, int n) {
    if (k < 2 || k > n) throw ArgumentError("operator G: need 2 <= k <= n");
}

void check_alpha(int k, std::span<const double> alpha) {
    if (static_cast<int>(alpha.size()) < k - 1)
        throw ArgumentError("operator G: need alpha_0..alpha_{k-2}");
}

}  // namespace

double g_value(int k, std::span<const double> alpha, const Spectrum& lambda) {
    check_k(k, lambda.size());
    check_alpha(k, alpha);
    const auto e = sigma_all(lambda.values());
    if (!(e[k - 1] > 0.0)) throw DomainError("g_value: sigma_{k-1} <= 0 (outside the cone)");
    double num = e[k];
    for (int l = 0; l <= k - 2; ++l) num -= alpha[l] * e[l];
    return num / e[k - 1];
}

double g_value(int k, std::span<const double> alpha, const HermitianMatrix& h) {
    return g_value(k, alpha, hermitian_eigen(h).lambda);
}

std::vector<double> g_spectral_derivative(int k, std::span<const double> alpha, const Spectrum& lambda) {
    const int n = lambda.size();
    check_k(k, n);
    check_alpha(k, alpha);
    const auto e = sigma_all(lambda.values());
    const double sk1 = e[k - 1];
    if (!(sk1 > 0.0)) throw DomainError("g_spectral_derivative: sigma_{k-1} <= 0");

    std::vector<double> d(static_cast<std::size_t>(n));
    std::vector<double> reduced(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::copy(lambda.values().begin(), lambda.values().end(), reduced.begin());
        reduced[i] = 0.0;
        const auto r = sigma_all(reduced);  // r[m] = sigma_m(lambda|i)
        auto reduced_sigma = [&r](int m) { return m < 0 ? 0.0 : r[m]; };
        auto quotient_derivative = [&](int a) {
            return (reduced_sigma(a - 1) * sk1 - e[a] * reduced_sigma(k - 2)) / (sk1 * sk1);
        };
        double di = quotient_derivative(k);
        for (int l = 0; l <= k - 2; ++l) di -= alpha[l] * quotient_derivative(l);
        d[i] = di;
    }
    return d;
}

HermitianMatrix g_gradient_spectral(int k, std::span<const double> alpha, const EigenResult& eig) {
    const auto d = g_spectral_derivative(k, alpha, eig.lambda);
    const int n = eig.lambda.size();
    const auto& u = eig.vectors;
    HermitianMatrix g{Eigen::MatrixXcd::Zero(n, n)};
    for (int p = 0; p < n; ++p) g.entries += d[p] * (u.col(p) * u.col(p).adjoint());
    g.entries = 0.5 * (g.entries + g.entries.adjoint()).eval();
    return g;
}

OperatorJet g_jet(int k, std::span<const double> alpha, const HermitianMatrix& h) {
    OperatorJet jet;
    jet.eig = hermitian_eigen(h);
    jet.value = g_value(k, alpha, jet.eig.lambda);
    jet.d = g_spectral_derivative(k, alpha, jet.eig.lambda);
    const int n = jet.eig.lambda.size();
    jet.gradient.entries = Eigen::MatrixXcd::Zero(n, n);
    for (int p = 0; p < n; ++p)
        jet.gradient.entries += jet.d[p] * (jet.eig.vectors.col(p) * jet.eig.vectors.col(p).adjoint());
    jet.gradient.entries = 0.5 * (jet.gradient.entries + jet.gradient.entries.adjoint()).eval();
    const auto e = sigma_all(jet.eig.lambda.values());
    jet.ratios.resize(static_cast<std::size_t>(k) + 1);
    for (int l = 0; l <= k; ++l) jet.ratios[l] = e[l] / e[k - 1];
    return jet;
}

RatioBounds ratio_bounds(int n, int k, std::span<const double> inf_alpha, double sup_alpha_sum) {
    check_k(k, n);
    if (static_cast<int>(inf_alpha.size()) != k)
        throw ArgumentError("ratio_bounds: need inf alpha_0..alpha_{k-1}");
    for (double a : inf_alpha)
        if (!(a > 0.0)) throw ArgumentError("ratio_bounds: alpha infima must be positive");
    if (!(sup_alpha_sum > 0.0)) throw ArgumentError("ratio_bounds: sup sum must be positive");

    const double cnk = binomial(n, k);
    const double cnk1 = binomial(n, k - 1);
    auto maclaurin_constant = [&](int l) {
        return std::pow(cnk, k - 1 - l) * binomial(n, l) / std::pow(cnk1, k - l);
    };

    RatioBounds b;
    b.lower = inf_alpha[k - 1];
    for (int l = 0; l <= k - 1; ++l) b.c_nk = std::max(b.c_nk, maclaurin_constant(l));
    b.upper = std::max(1.0, b.c_nk * sup_alpha_sum);
    b.ratio_uppers.resize(static_cast<std::size_t>(k - 1));
    for (int l = 0; l <= k - 2; ++l)
        b.ratio_uppers[l] = std::max(1.0 / inf_alpha[l], maclaurin_constant(l));
    return b;
}

TraceValues trace_values(int k, std::span<const double> alpha, const EigenResult& eig) {
    const auto d = g_spectral_derivative(k, alpha, eig.lambda);
    TraceValues t;
    for (int i = 0; i < eig.lambda.size(); ++i) {
        t.trace += d[i];
        t.weighted += d[i] * eig.lambda[i];
    }
    return t;
}

double concavity_probe(int k, std::span<const double> alpha, const HermitianMatrix& h0,
                       const HermitianMatrix& h1) {
    const HermitianMatrix mid{0.5 * (h0.entries + h1.entries)};
    return g_value(k, alpha, mid) - 0.5 * (g_value(k, alpha, h0) + g_value(k, alpha, h1));
}

Eigen::MatrixXd real_form(const HermitianMatrix& gradient) {
    const int n = gradient.n();
    const Eigen::MatrixXd p = gradient.entries.real();
    const Eigen::MatrixXd q = gradient.entries.imag();
    Eigen::MatrixXd a(2 * n, 2 * n);
    a.topLeftCorner(n, n) = p;
    a.bottomRightCorner(n, n) = p;
    a.topRightCorner(n, n) = q;
    a.bottomLeftCorner(n, n) = -q;
    return 0.25 * a;
}

}  // namespace mixhess
