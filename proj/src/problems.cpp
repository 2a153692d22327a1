#include "mixhess/problems.hpp"

#include "mixhess/errors.hpp"

#include <array>

namespace mixhess {

namespace {

std::array<double, 4> local(const std::vector<double>& center, std::span<const double> t) {
    if (t.size() != 4 || center.size() != 4) throw ArgumentError("manufactured solution lives in C^2");
    return {t[0] - center[0], t[1] - center[1], t[2] - center[2], t[3] - center[3]};
}

// z1 = y0 + i y2, z2 = y1 + i y3; the cross term is (y0 y1 + y2 y3) / 2.
constexpr int partner[4] = {1, 0, 3, 2};

}  // namespace

double Manufactured::value(std::span<const double> t) const {
    const auto y = local(center, t);
    const double s = y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
    return s + 0.5 * (y[0] * y[1] + y[2] * y[3]) + beta * s * s;
}

std::vector<double> Manufactured::gradient(std::span<const double> t) const {
    const auto y = local(center, t);
    const double s = y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
    std::vector<double> g(4);
    for (int a = 0; a < 4; ++a) g[a] = 2.0 * y[a] + 0.5 * y[partner[a]] + 4.0 * beta * s * y[a];
    return g;
}

RealHessian Manufactured::hessian(std::span<const double> t) const {
    const auto y = local(center, t);
    const double s = y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3];
    RealHessian d2{Eigen::MatrixXd(4, 4)};
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            d2.entries(a, b) = (a == b ? 2.0 + 4.0 * beta * s : 0.0) + 8.0 * beta * y[a] * y[b] +
                               (b == partner[a] ? 0.5 : 0.0);
    return d2;
}

double Manufactured::alpha1(std::span<const double> t) const {
    const auto eig = hermitian_eigen(to_complex_hessian(hessian(t)));
    const auto e = sigma_all(eig.lambda.values());
    return (e[2] - alpha0) / e[1];
}

ProblemData Manufactured::problem(const DomainSpec& domain, double eps, const SolverTolerances& tol) const {
    if (domain.n != 2) throw ArgumentError("manufactured solution lives in C^2");
    for (int a = 0; a < 4; ++a)
        if (domain.center[a] != center[a]) throw ArgumentError("manufactured solution: center mismatch");
    ProblemData p;
    p.n = 2;
    p.k = 2;
    p.eps = eps;
    p.domain = domain;
    p.tol = tol;
    const double a0 = alpha0;
    p.alpha.push_back([a0](std::span<const double>) { return a0; });
    const Manufactured self = *this;
    p.alpha.push_back([self](std::span<const double> t) { return self.alpha1(t); });
    p.phi = [self, domain, eps](std::span<const double> t) {
        const auto nu = defining_function(domain, t).normal;
        const auto g = self.gradient(t);
        double dn = 0.0;
        for (int a = 0; a < 4; ++a) dn += g[a] * nu[a];
        return dn + eps * self.value(t);
    };
    return p;
}

ProblemData radial_ball_problem(int n, int k, double R, std::vector<double> alpha, double phi, double eps,
                                const SolverTolerances& tol) {
    if (static_cast<int>(alpha.size()) != k) throw ArgumentError("radial_ball_problem: need alpha_0..alpha_{k-1}");
    ProblemData p;
    p.n = n;
    p.k = k;
    p.eps = eps;
    p.domain = DomainSpec::ball(n, R);
    p.tol = tol;
    for (double a : alpha) p.alpha.push_back([a](std::span<const double>) { return a; });
    p.phi = [phi](std::span<const double>) { return phi; };
    return p;
}

RadialProblem radial_oracle_problem(int n, int k, double R, std::vector<double> alpha) {
    RadialProblem p;
    p.n = n;
    p.k = k;
    p.R = R;
    for (double a : alpha) p.alpha.push_back({a});
    p.validate();
    return p;
}

}  // namespace mixhess
