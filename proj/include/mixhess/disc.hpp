#pragma once

// Finite-difference discretization of
//
//   G(ddbar u, z) = alpha_{k-1}(z)          in the domain,
//   D_nu u = -eps u + phi(z)                on the boundary,
//
// a damped Newton solver with an admissibility safeguard, and the eps -> 0
// continuation producing the classical Neumann constant.

#include "mixhess/geom.hpp"
#include "mixhess/gop.hpp"

#include <Eigen/Sparse>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace mixhess {

/// Real-valued function of a point t in R^{2n}.
using PointFunction = std::function<double(std::span<const double>)>;

/// Polynomial c_0 + c_1 s + c_2 s^2 + ... in s = |t - center|^2.
PointFunction radial_polynomial(std::vector<double> coeffs, std::vector<double> center);
double eval_polynomial(std::span<const double> coeffs, double s);

struct SolverTolerances {
    double residual_tol = 1e-9;  ///< stop when the max residual (interior and boundary) is below this
    double cone_margin = 1e-8;   ///< delta_cone: accepted iterates keep sigma_i >= this
    int max_iterations = 50;
    double linear_tol = 1e-10;   ///< relative residual of each Newton linear solve
    double min_step = 1e-12;     ///< line search gives up below this step
    double armijo = 1e-4;
};

struct ProblemData {
    int n = 2;
    int k = 2;
    std::vector<PointFunction> alpha;  ///< alpha_0..alpha_{k-1}
    PointFunction phi;                 ///< boundary datum, evaluated at boundary feet
    double eps = 0.5;
    DomainSpec domain;
    SolverTolerances tol;

    void validate() const;
};

/// Values on every non-exterior grid point, indexed by unknown.
class ScalarField {
public:
    ScalarField() = default;
    ScalarField(std::shared_ptr<const Grid> grid, std::vector<double> values);
    ScalarField(std::shared_ptr<const Grid> grid, const PointFunction& f);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::int32_t u) const { return values_[static_cast<std::size_t>(u)]; }
    double mean() const;
    double max_abs() const;

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<double> values_;
};

struct Residual {
    std::vector<double> interior;  ///< per interior unknown, G - alpha_{k-1}
    std::vector<double> boundary;  ///< per band point, D_nu u + eps u - phi
    double interior_max() const;
    double boundary_max() const;
};

struct Diagnostics {
    double sup_Du = 0.0;
    double sup_D2u = 0.0;
    double max_Dnunu = 0.0;
    double hessian_ratio = 0.0;  ///< sup|D^2 u| / (1 + max|D_nunu u|)
};

struct IterationRecord {
    double merit = 0.0;     ///< 0.5 ||scaled residual||^2 after the step
    double max_residual = 0.0;
    double step = 0.0;
    double margin = 0.0;    ///< min over interior points of min_i sigma_i
    int linear_iterations = 0;
};

struct SolveReport {
    ScalarField solution;
    int iterations = 0;
    double interior_residual = 0.0;
    double boundary_residual = 0.0;
    double margin = 0.0;
    Diagnostics diagnostics;
    std::vector<IterationRecord> history;
};

/// One sparse row: sum coef * u[unknown].
struct LinearRow {
    std::vector<std::pair<std::int32_t, double>> terms;
    double apply(std::span<const double> u) const;
};

/// Problem bound to a grid: coefficient values cached at the grid points and
/// the boundary rows assembled once.
class Discretization {
public:
    Discretization(std::shared_ptr<const Grid> grid, ProblemData problem);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    const ProblemData& problem() const { return problem_; }

    /// alpha_l at an unknown.
    double alpha(int l, std::int32_t unknown) const {
        return alpha_[static_cast<std::size_t>(l) * grid_->num_unknowns() + unknown];
    }
    std::span<const double> alpha_at(std::int32_t unknown, std::vector<double>& scratch) const;
    double alpha_sup(int l) const { return alpha_sup_[l]; }
    double alpha_inf(int l) const { return alpha_inf_[l]; }
    double phi_max_abs() const { return phi_max_abs_; }
    double phi_at_band(std::size_t b) const { return phi_[b]; }

    /// Real Hessian at an interior unknown by central differences.
    RealHessian hessian(std::span<const double> u, std::int32_t unknown) const;

    /// Interior and boundary residuals; throws AdmissibilityError if an interior
    /// point has min_i sigma_i < cone_margin.
    Residual residual(const ScalarField& u) const;

    /// Boundary collocation row: D_nu u(x_b) + eps u(x_b).
    const LinearRow& boundary_row(std::size_t b) const { return bc_rows_[b]; }
    /// D_nu nu u at the boundary foot along the band normal.
    const LinearRow& normal_second_row(std::size_t b) const { return nn_rows_[b]; }
    /// u(x_b) reconstructed along the normal.
    const LinearRow& foot_value_row(std::size_t b) const { return foot_rows_[b]; }

    Diagnostics diagnostics(const ScalarField& u) const;

    struct Evaluation {
        Residual residual;
        bool admissible = true;
        double margin = 0.0;
        std::int32_t worst_unknown = -1;
        std::vector<double> worst_sigmas;
    };
    /// Non-throwing evaluation; fills jacobian when requested and admissible.
    Evaluation evaluate(std::span<const double> u, Eigen::SparseMatrix<double, Eigen::RowMajor>* jacobian) const;

    /// Row scaling used for the merit function and the linear systems (h^2 interior, h boundary).
    double interior_scale() const { return grid_->spacing() * grid_->spacing(); }
    double boundary_scale() const { return grid_->spacing(); }

private:
    std::shared_ptr<const Grid> grid_;
    ProblemData problem_;
    std::vector<double> alpha_;  ///< k blocks of num_unknowns
    std::vector<double> alpha_sup_, alpha_inf_;
    std::vector<double> phi_;    ///< per band point
    double phi_max_abs_ = 0.0;
    std::vector<LinearRow> bc_rows_, nn_rows_, foot_rows_;
    std::vector<std::int64_t> stencil_offsets_;
};

/// Residual of a field; convenience wrapper for Discretization::residual.
Residual residual(const ScalarField& u, const Discretization& disc);

/// The comparison barrier 2A|t - t1|^2 (complex Hessian 2A I) with A = compute_A(sup alpha)
/// and t1 the domain center; with shift_constant the constant that zeroes the mean
/// boundary residual is added.
ScalarField barrier_field(const Discretization& disc, bool shift_constant = true);

/// Damped Newton; throws ArgumentError (eps <= 0), AdmissibilityError, ConvergenceError.
SolveReport newton_solve(const Discretization& disc, const ScalarField& u0);

struct ContinuationStep {
    double eps = 0.0;
    SolveReport report;
    double c_eps = 0.0;  ///< -eps * mean(u^eps)
};

struct ContinuationResult {
    std::vector<ContinuationStep> steps;
    double c = 0.0;                   ///< extrapolated to eps = 0
    ScalarField v;                    ///< u^{eps_m} - mean
    std::optional<std::string> failure;
    bool complete() const { return !failure.has_value(); }
};

/// Warm-started solves down a strictly decreasing positive schedule; c by
/// polynomial (Richardson) extrapolation of the last three c_eps to eps = 0.
ContinuationResult continue_epsilon(const ProblemData& problem, std::shared_ptr<const Grid> grid,
                                    std::span<const double> schedule);

/// Value at 0 of the polynomial through (x_i, y_i).
double extrapolate_to_zero(std::span<const double> x, std::span<const double> y);

}  // namespace mixhess
