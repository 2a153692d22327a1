#pragma once

// Complex Hessian algebra on C^n = R^{2n} with z_j = t_j + i t_{n+j}.

#include "mixhess/symfun.hpp"

#include <Eigen/Dense>
#include <complex>

namespace mixhess {

using cplx = std::complex<double>;

/// Real symmetric 2n x 2n matrix of second derivatives D_{t_p t_q} u.
struct RealHessian {
    Eigen::MatrixXd entries;
    int n() const { return static_cast<int>(entries.rows() / 2); }
};

/// n x n Hermitian matrix H_{ij} = d^2 u / dz_i d\bar z_j.
struct HermitianMatrix {
    Eigen::MatrixXcd entries;
    int n() const { return static_cast<int>(entries.rows()); }
};

struct EigenResult {
    Spectrum lambda;          ///< descending
    Eigen::MatrixXcd vectors; ///< unitary, column p belongs to lambda[p]
    double residual = 0.0;    ///< ||H U - U diag(lambda)||_inf
    int sweeps = 0;
};

/// H_ij = 1/4 [(D_{i j} + D_{n+i n+j}) + i (D_{i n+j} - D_{n+i j})] u.
/// Throws ArgumentError if D2 is not symmetric to 1e-14 relative.
HermitianMatrix to_complex_hessian(const RealHessian& d2);

/// Cyclic complex Jacobi; throws NumericError after 100 sweeps.
EigenResult hermitian_eigen(const HermitianMatrix& h);

/// sigma_i(lambda(H)) >= margin for i = 1..k.
bool admissible(int k, const HermitianMatrix& h, double margin);

/// Induced infinity norm (max absolute row sum).
double inf_norm(const Eigen::MatrixXcd& m);

}  // namespace mixhess
