#pragma once

// Reference problems with known solutions.

#include "mixhess/disc.hpp"
#include "mixhess/radial.hpp"

namespace mixhess {

/// n = k = 2 manufactured solution
///   u*(z) = |z|^2 + 1/4 (z1 conj(z2) + conj(z1) z2) + beta |z|^4   (z relative to the domain center)
/// with alpha_0 constant and alpha_1 := (sigma_2 - alpha_0 sigma_0) / sigma_1 evaluated at u*,
/// phi := D_nu u* + eps u*.
struct Manufactured {
    double alpha0 = 0.5;
    double beta = 0.125;
    std::vector<double> center = {0.0, 0.0, 0.0, 0.0};

    double value(std::span<const double> t) const;
    std::vector<double> gradient(std::span<const double> t) const;
    RealHessian hessian(std::span<const double> t) const;
    double alpha1(std::span<const double> t) const;

    /// Problem on the given domain (must be in C^2 with the same center).
    ProblemData problem(const DomainSpec& domain, double eps, const SolverTolerances& tol = {}) const;
};

/// Constant-coefficient, constant-phi problem on a ball; the setting of the radial oracle.
ProblemData radial_ball_problem(int n, int k, double R, std::vector<double> alpha, double phi, double eps,
                                const SolverTolerances& tol = {});

/// Matching radial oracle problem.
RadialProblem radial_oracle_problem(int n, int k, double R, std::vector<double> alpha);

}  // namespace mixhess
