#include "mixhess/chess.hpp"

#include "mixhess/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mixhess {

double inf_norm(const Eigen::MatrixXcd& m) {
    double best = 0.0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) best = std::max(best, m.row(i).cwiseAbs().sum());
    return best;
}

HermitianMatrix to_complex_hessian(const RealHessian& d2) {
    const auto& d = d2.entries;
    if (d.rows() != d.cols() || d.rows() % 2 != 0 || d.rows() == 0)
        throw ArgumentError("to_complex_hessian: expected a 2n x 2n matrix");
    const double scale = std::max(1.0, d.cwiseAbs().maxCoeff());
    if ((d - d.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale)
        throw ArgumentError("to_complex_hessian: real Hessian is not symmetric");

    const int n = d2.n();
    HermitianMatrix h{Eigen::MatrixXcd(n, n)};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            h.entries(i, j) = 0.25 * cplx(d(i, j) + d(n + i, n + j), d(i, n + j) - d(n + i, j));
    return h;
}

namespace {

double off_diagonal_norm(const Eigen::MatrixXcd& a) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EigenResult hermitian_eigen(const HermitianMatrix& h) {
    const int n = h.n();
    if (n < 1 || h.entries.cols() != n) throw ArgumentError("hermitian_eigen: square matrix expected");
    const double scale = std::max(1.0, h.entries.cwiseAbs().maxCoeff());
    if ((h.entries - h.entries.adjoint()).cwiseAbs().maxCoeff() > 1e-14 * scale)
        throw ArgumentError("hermitian_eigen: matrix is not Hermitian");

    Eigen::MatrixXcd a = 0.5 * (h.entries + h.entries.adjoint());
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(n, n);
    const double target = 1e-14 * a.norm();

    int sweep = 0;
    while (off_diagonal_norm(a) > target) {
        if (++sweep > 100) throw NumericError("hermitian_eigen: no convergence after 100 sweeps");
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double b = std::abs(a(p, q));
                if (b == 0.0) continue;
                // Phase e makes the (p,q) entry real; then a real rotation annihilates it.
                const cplx e = a(p, q) / b;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * b);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // V = diag(1, conj e) * [[c, s], [-s, c]] on the (p,q) plane.
                const cplx vpp = c, vpq = s, vqp = -s * std::conj(e), vqq = c * std::conj(e);
                for (int r = 0; r < n; ++r) {
                    const cplx arp = a(r, p), arq = a(r, q);
                    a(r, p) = arp * vpp + arq * vqp;
                    a(r, q) = arp * vpq + arq * vqq;
                    const cplx urp = u(r, p), urq = u(r, q);
                    u(r, p) = urp * vpp + urq * vqp;
                    u(r, q) = urp * vpq + urq * vqq;
                }
                for (int col = 0; col < n; ++col) {
                    const cplx apc = a(p, col), aqc = a(q, col);
                    a(p, col) = std::conj(vpp) * apc + std::conj(vqp) * aqc;
                    a(q, col) = std::conj(vpq) * apc + std::conj(vqq) * aqc;
                }
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&a](int x, int y) { return a(x, x).real() > a(y, y).real(); });

    EigenResult out;
    std::vector<double> lam(static_cast<std::size_t>(n));
    out.vectors.resize(n, n);
    for (int i = 0; i < n; ++i) {
        lam[i] = a(order[i], order[i]).real();
        out.vectors.col(i) = u.col(order[i]);
    }
    out.lambda = Spectrum(std::move(lam));
    Eigen::VectorXcd dl(n);
    for (int i = 0; i < n; ++i) dl(i) = out.lambda[i];
    out.residual = inf_norm(h.entries * out.vectors - out.vectors * dl.asDiagonal());
    out.sweeps = sweep;
    return out;
}

bool admissible(int k, const HermitianMatrix& h, double margin) {
    if (k < 1 || k > h.n()) throw ArgumentError("admissible: k outside [1, n]");
    const auto eig = hermitian_eigen(h);
    const auto e = sigma_all(eig.lambda.values());
    for (int i = 1; i <= k; ++i)
        if (!(e[i] >= margin)) return false;
    return true;
}

}  // namespace mixhess
