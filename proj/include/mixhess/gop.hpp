#pragma once

// The quotient operator
//
//   G(H, z) = sigma_k/sigma_{k-1} - sum_{l=0}^{k-2} alpha_l sigma_l/sigma_{k-1},
//
// which equals alpha_{k-1}(z) exactly where the mixed Hessian equation holds,
// together with its spectral derivatives and the trace/ratio bound kit.

#include "mixhess/chess.hpp"

#include <span>
#include <vector>

namespace mixhess {

/// alpha_0..alpha_{k-1} evaluated at one point.
struct CoefficientValues {
    int k = 0;
    std::vector<double> alpha;
};

struct OperatorJet {
    double value = 0.0;
    HermitianMatrix gradient;   ///< G^{i\bar j}
    std::vector<double> d;      ///< dG/dlambda_p in eigen order
    std::vector<double> ratios; ///< sigma_l/sigma_{k-1}, l = 0..k
    EigenResult eig;
};

double g_value(int k, std::span<const double> alpha, const Spectrum& lambda);
double g_value(int k, std::span<const double> alpha, const HermitianMatrix& h);

/// dG/dlambda_i via d(sigma_a/sigma_b) = [sigma_{a-1}(l|i) sigma_b - sigma_a sigma_{b-1}(l|i)] / sigma_b^2.
std::vector<double> g_spectral_derivative(int k, std::span<const double> alpha, const Spectrum& lambda);

/// G^{i\bar j} = sum_p d_p U_ip conj(U_jp). First-order change of G under a
/// Hermitian perturbation E is tr(G E) = sum_ij G^{i\bar j} E_ji.
HermitianMatrix g_gradient_spectral(int k, std::span<const double> alpha, const EigenResult& eig);

/// Everything at once from a Hermitian matrix; throws DomainError when sigma_{k-1} <= 0.
OperatorJet g_jet(int k, std::span<const double> alpha, const HermitianMatrix& h);

struct RatioBounds {
    double lower = 0.0;               ///< inf alpha_{k-1}
    double upper = 0.0;               ///< bound on sigma_k / sigma_{k-1}
    std::vector<double> ratio_uppers; ///< bound on sigma_l / sigma_{k-1}, l = 0..k-2
    double c_nk = 0.0;                ///< max_l (C_n^k)^{k-1-l} C_n^l / (C_n^{k-1})^{k-l}
};

/// Constants from the two-case (ratio <= 1 / Newton-Maclaurin) argument.
/// inf_alpha holds inf alpha_0..inf alpha_{k-1}.
RatioBounds ratio_bounds(int n, int k, std::span<const double> inf_alpha, double sup_alpha_sum);

struct TraceValues {
    double trace = 0.0;    ///< sum_i G^{i\bar i}
    double weighted = 0.0; ///< sum G^{i\bar j} u_{i\bar j} = sum_i d_i lambda_i
};

TraceValues trace_values(int k, std::span<const double> alpha, const EigenResult& eig);

/// G((H0+H1)/2) - (G(H0)+G(H1))/2; non-negative for a concave operator.
double concavity_probe(int k, std::span<const double> alpha, const HermitianMatrix& h0,
                       const HermitianMatrix& h1);

/// The 2n x 2n real form A with dG = sum_{pq} A_pq dD_pq for a perturbation of the real Hessian.
Eigen::MatrixXd real_form(const HermitianMatrix& gradient);

}  // namespace mixhess
