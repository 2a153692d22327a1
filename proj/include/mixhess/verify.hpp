#pragma once

// Explicit a priori constants and the estimate harness run on computed solutions.

#include "mixhess/disc.hpp"

#include <span>
#include <string>
#include <vector>

namespace mixhess {

/// Smallest A (bisection, 1e-10) with
///   2A C_n^k/C_n^{k-1} - sum_{l<=k-2} sup alpha_l (2A)^{-(k-1-l)} C_n^l/C_n^{k-1} >= sup alpha_{k-1}.
double compute_A(int n, int k, std::span<const double> sup_alphas);

/// Left-hand side of the barrier inequality above.
double barrier_operator_value(int n, int k, std::span<const double> sup_alphas, double A);

/// M0 = max(max|phi|, max|phi| + 2A diam + A diam^2).
double compute_M0(int n, int k, std::span<const double> sup_alphas, double max_phi, double diam);

struct PointRecord {
    std::int32_t unknown = -1;
    std::vector<double> coords;
    double value = 0.0;  ///< quantity checked at the worst point
    double bound = 0.0;  ///< bound it was compared with
};

struct CheckResult {
    bool ok = true;
    double margin = 0.0;  ///< bound - value at the worst point (negative on failure)
    PointRecord worst;
};

struct EstimateReport {
    double M0 = 0.0;
    double A_barrier = 0.0;
    double slack_c0 = 0.0;
    double sup_eps_u = 0.0;
    double sup_Du = 0.0;
    double sup_D2u = 0.0;
    double max_Dnunu = 0.0;
    double hessian_ratio = 0.0;
    CheckResult c0;
    CheckResult ratios;
    CheckResult traces;
    CheckResult barrier;

    bool all_ok() const { return c0.ok && ratios.ok && traces.ok && barrier.ok; }
    /// Name of the first failing bound, empty when all hold.
    std::string first_failure() const;
};

/// Checks sup|eps u| <= M0 + 10h, the ratio/trace bounds at every interior
/// point (slack 1e-6), and that u - 2A|t - t1|^2 attains its grid minimum on the
/// band; records the derivative diagnostics.
EstimateReport check_field(const ScalarField& u, const Discretization& disc);
EstimateReport check_solution(const SolveReport& report, const Discretization& disc);

/// Throws VerificationError naming the first violated bound.
void enforce(const EstimateReport& report);

}  // namespace mixhess
