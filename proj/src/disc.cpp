#include "mixhess/disc.hpp"

#include "mixhess/errors.hpp"
#include "mixhess/verify.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mixhess {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

double eval_polynomial(std::span<const double> coeffs, double s) {
    double v = 0.0;
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * s + coeffs[i];
    return v;
}

PointFunction radial_polynomial(std::vector<double> coeffs, std::vector<double> center) {
    return [coeffs = std::move(coeffs), center = std::move(center)](std::span<const double> t) {
        double s = 0.0;
        for (std::size_t a = 0; a < t.size(); ++a) {
            const double y = t[a] - (center.empty() ? 0.0 : center[a]);
            s += y * y;
        }
        return eval_polynomial(coeffs, s);
    };
}

void ProblemData::validate() const {
    if (n < 1) throw ArgumentError("problem: n must be >= 1");
    if (k < 2 || k > n) throw ArgumentError("problem: need 2 <= k <= n");
    if (static_cast<int>(alpha.size()) != k) throw ArgumentError("problem: need alpha_0..alpha_{k-1}");
    for (const auto& a : alpha)
        if (!a) throw ArgumentError("problem: empty coefficient function");
    if (!phi) throw ArgumentError("problem: empty boundary datum");
    if (!(eps >= 0.0)) throw ArgumentError("problem: eps must be >= 0");
    if (domain.n != n) throw ArgumentError("problem: domain dimension does not match n");
    domain.validate();
    if (!(tol.cone_margin >= 0.0) || !(tol.residual_tol > 0.0) || tol.max_iterations < 0 ||
        !(tol.linear_tol > 0.0) || !(tol.min_step > 0.0))
        throw ArgumentError("problem: invalid solver tolerances");
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(std::shared_ptr<const Grid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (!grid_) throw ArgumentError("ScalarField: null grid");
    if (static_cast<std::int64_t>(values_.size()) != grid_->num_unknowns())
        throw ArgumentError("ScalarField: value count does not match the grid");
    for (double v : values_)
        if (!std::isfinite(v)) throw ArgumentError("ScalarField: non-finite value");
}

ScalarField::ScalarField(std::shared_ptr<const Grid> grid, const PointFunction& f) : grid_(std::move(grid)) {
    if (!grid_) throw ArgumentError("ScalarField: null grid");
    values_.resize(static_cast<std::size_t>(grid_->num_unknowns()));
    for (std::int32_t u = 0; u < grid_->num_unknowns(); ++u) values_[u] = f(grid_->unknown_coords(u));
}

double ScalarField::mean() const {
    if (values_.empty()) return 0.0;
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
}

double ScalarField::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

double Residual::interior_max() const {
    double m = 0.0;
    for (double r : interior) m = std::max(m, std::abs(r));
    return m;
}

double Residual::boundary_max() const {
    double m = 0.0;
    for (double r : boundary) m = std::max(m, std::abs(r));
    return m;
}

double LinearRow::apply(std::span<const double> u) const {
    double s = 0.0;
    for (const auto& [col, w] : terms) s += w * u[static_cast<std::size_t>(col)];
    return s;
}

// ---------------------------------------------------------------------------

namespace {

struct QuadraticNodes {
    double value[3];      // l_j(0)
    double slope[3];      // l_j'(0)
    double curvature[3];  // l_j''
};

QuadraticNodes lagrange_at_zero(const double s[3]) {
    QuadraticNodes q{};
    for (int j = 0; j < 3; ++j) {
        const double a = s[(j + 1) % 3], b = s[(j + 2) % 3];
        const double den = (s[j] - a) * (s[j] - b);
        q.value[j] = a * b / den;
        q.slope[j] = -(a + b) / den;
        q.curvature[j] = 2.0 / den;
    }
    return q;
}

void add_scaled(std::vector<std::pair<std::int32_t, double>>& out,
                const std::vector<std::pair<std::int32_t, double>>& terms, double scale) {
    for (const auto& [col, w] : terms) out.emplace_back(col, scale * w);
}

LinearRow compress(std::vector<std::pair<std::int32_t, double>> terms) {
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    LinearRow row;
    for (const auto& [col, w] : terms) {
        if (!row.terms.empty() && row.terms.back().first == col) row.terms.back().second += w;
        else row.terms.emplace_back(col, w);
    }
    return row;
}

// Combination of the three normal nodes (band point, two samples) with weights c[j].
LinearRow normal_combination(const BandPoint& b, const double c[3]) {
    std::vector<std::pair<std::int32_t, double>> terms;
    terms.emplace_back(b.unknown, c[0]);
    for (int j = 0; j < 2; ++j) {
        add_scaled(terms, b.samples[j].multilinear, c[j + 1]);
        add_scaled(terms, b.samples[j].correction, c[j + 1]);
    }
    return compress(std::move(terms));
}

}  // namespace

Discretization::Discretization(std::shared_ptr<const Grid> grid, ProblemData problem)
    : grid_(std::move(grid)), problem_(std::move(problem)) {
    if (!grid_) throw ArgumentError("Discretization: null grid");
    problem_.validate();
    if (grid_->domain().n != problem_.n) throw ArgumentError("Discretization: grid and problem dimensions differ");

    const int k = problem_.k;
    const auto nu = static_cast<std::size_t>(grid_->num_unknowns());
    alpha_.resize(static_cast<std::size_t>(k) * nu);
    alpha_sup_.assign(static_cast<std::size_t>(k), -std::numeric_limits<double>::infinity());
    alpha_inf_.assign(static_cast<std::size_t>(k), std::numeric_limits<double>::infinity());
    for (std::size_t u = 0; u < nu; ++u) {
        const auto t = grid_->unknown_coords(static_cast<std::int32_t>(u));
        for (int l = 0; l < k; ++l) {
            const double a = problem_.alpha[l](t);
            if (!(a > 0.0) || !std::isfinite(a)) {
                std::ostringstream msg;
                msg << "coefficient alpha_" << l << " is not positive at grid point " << grid_->point_of(static_cast<std::int32_t>(u));
                throw ArgumentError(msg.str());
            }
            alpha_[l * nu + u] = a;
            alpha_sup_[l] = std::max(alpha_sup_[l], a);
            alpha_inf_[l] = std::min(alpha_inf_[l], a);
        }
    }

    const auto& band = grid_->band();
    phi_.resize(band.size());
    bc_rows_.resize(band.size());
    nn_rows_.resize(band.size());
    foot_rows_.resize(band.size());
    for (std::size_t b = 0; b < band.size(); ++b) {
        phi_[b] = problem_.phi(band[b].foot);
        if (!std::isfinite(phi_[b])) throw ArgumentError("boundary datum is not finite");
        phi_max_abs_ = std::max(phi_max_abs_, std::abs(phi_[b]));
        const double s[3] = {band[b].depth, band[b].samples[0].depth, band[b].samples[1].depth};
        const auto q = lagrange_at_zero(s);
        // s measures depth along -nu, so D_nu = -d/ds.
        double bc[3], nn[3], val[3];
        for (int j = 0; j < 3; ++j) {
            bc[j] = -q.slope[j] + problem_.eps * q.value[j];
            nn[j] = q.curvature[j];
            val[j] = q.value[j];
        }
        bc_rows_[b] = normal_combination(band[b], bc);
        nn_rows_[b] = normal_combination(band[b], nn);
        foot_rows_[b] = normal_combination(band[b], val);
    }

    const int m = grid_->dim();
    for (int a = 0; a < m; ++a) {
        stencil_offsets_.push_back(grid_->stride(a));
        stencil_offsets_.push_back(-grid_->stride(a));
    }
    for (int a = 0; a < m; ++a)
        for (int c = a + 1; c < m; ++c)
            for (int sa : {1, -1})
                for (int sc : {1, -1}) stencil_offsets_.push_back(sa * grid_->stride(a) + sc * grid_->stride(c));
}

std::span<const double> Discretization::alpha_at(std::int32_t unknown, std::vector<double>& scratch) const {
    scratch.resize(static_cast<std::size_t>(problem_.k));
    for (int l = 0; l < problem_.k; ++l) scratch[l] = alpha(l, unknown);
    return scratch;
}

RealHessian Discretization::hessian(std::span<const double> u, std::int32_t unknown) const {
    const int m = grid_->dim();
    const double h = grid_->spacing();
    const std::int64_t p = grid_->point_of(unknown);
    auto at = [&](std::int64_t offset) { return u[static_cast<std::size_t>(grid_->unknown_of(p + offset))]; };
    const double u0 = u[static_cast<std::size_t>(unknown)];
    RealHessian d2{Eigen::MatrixXd(m, m)};
    std::size_t o = 0;
    for (int a = 0; a < m; ++a, o += 2)
        d2.entries(a, a) = (at(stencil_offsets_[o]) - 2.0 * u0 + at(stencil_offsets_[o + 1])) / (h * h);
    for (int a = 0; a < m; ++a)
        for (int c = a + 1; c < m; ++c, o += 4) {
            const double v = (at(stencil_offsets_[o]) - at(stencil_offsets_[o + 1]) - at(stencil_offsets_[o + 2]) +
                              at(stencil_offsets_[o + 3])) / (4.0 * h * h);
            d2.entries(a, c) = d2.entries(c, a) = v;
        }
    return d2;
}

Discretization::Evaluation Discretization::evaluate(std::span<const double> u, SpMat* jacobian) const {
    const auto& interior = grid_->interior();
    const auto& band = grid_->band();
    const int m = grid_->dim();
    const int k = problem_.k;
    const double delta = problem_.tol.cone_margin;
    const std::int32_t nu = grid_->num_unknowns();

    Evaluation ev;
    ev.residual.interior.assign(interior.size(), 0.0);
    ev.residual.boundary.assign(band.size(), 0.0);
    std::vector<double> margins(interior.size(), 0.0);

    // CSR layout: interior rows have 1 + stencil entries, band rows their precomputed length.
    const std::size_t stencil = 1 + stencil_offsets_.size();
    std::vector<int> row_len;
    std::vector<int> row_start;
    std::vector<int> inner;
    std::vector<double> vals;
    if (jacobian) {
        row_len.assign(static_cast<std::size_t>(nu), 0);
        for (auto q : interior) row_len[q] = static_cast<int>(stencil);
        for (std::size_t b = 0; b < band.size(); ++b) row_len[band[b].unknown] = static_cast<int>(bc_rows_[b].terms.size());
        row_start.assign(static_cast<std::size_t>(nu) + 1, 0);
        for (std::int32_t r = 0; r < nu; ++r) row_start[r + 1] = row_start[r] + row_len[r];
        inner.resize(static_cast<std::size_t>(row_start.back()));
        vals.resize(static_cast<std::size_t>(row_start.back()));
    }

    const auto ni = static_cast<std::int64_t>(interior.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < ni; ++i) {
        const std::int32_t q = interior[i];
        std::vector<double> scratch;
        const auto alpha = alpha_at(q, scratch);
        const auto hc = to_complex_hessian(hessian(u, q));
        OperatorJet jet;
        try {
            jet = g_jet(k, alpha, hc);
        } catch (const DomainError&) {
            margins[i] = -std::numeric_limits<double>::infinity();
            ev.residual.interior[i] = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        margins[i] = cone_margin(k, jet.eig.lambda.values());
        ev.residual.interior[i] = jet.value - alpha[k - 1];
        if (!jacobian) continue;

        const Eigen::MatrixXd A = real_form(jet.gradient);
        std::vector<std::pair<int, double>> row;
        row.reserve(stencil);
        const std::int64_t p = grid_->point_of(q);
        double centre = 0.0;
        std::size_t o = 0;
        for (int a = 0; a < m; ++a, o += 2) {
            centre -= 2.0 * A(a, a);
            row.emplace_back(grid_->unknown_of(p + stencil_offsets_[o]), A(a, a));
            row.emplace_back(grid_->unknown_of(p + stencil_offsets_[o + 1]), A(a, a));
        }
        for (int a = 0; a < m; ++a)
            for (int c = a + 1; c < m; ++c, o += 4) {
                const double w = 0.5 * A(a, c);
                row.emplace_back(grid_->unknown_of(p + stencil_offsets_[o]), w);
                row.emplace_back(grid_->unknown_of(p + stencil_offsets_[o + 1]), -w);
                row.emplace_back(grid_->unknown_of(p + stencil_offsets_[o + 2]), -w);
                row.emplace_back(grid_->unknown_of(p + stencil_offsets_[o + 3]), w);
            }
        row.emplace_back(q, centre);
        std::sort(row.begin(), row.end());
        const auto start = row_start[q];
        for (std::size_t e = 0; e < row.size(); ++e) {
            inner[start + e] = row[e].first;
            vals[start + e] = row[e].second;
        }
    }

    const double hb = boundary_scale();
    for (std::size_t b = 0; b < band.size(); ++b) {
        ev.residual.boundary[b] = bc_rows_[b].apply(u) - phi_[b];
        if (!jacobian) continue;
        const auto start = row_start[band[b].unknown];
        const auto& terms = bc_rows_[b].terms;
        for (std::size_t e = 0; e < terms.size(); ++e) {
            inner[start + e] = terms[e].first;
            vals[start + e] = hb * terms[e].second;
        }
    }

    ev.margin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < margins.size(); ++i) {
        if (margins[i] < ev.margin) {
            ev.margin = margins[i];
            ev.worst_unknown = interior[i];
        }
    }
    if (interior.empty()) ev.margin = 0.0;
    ev.admissible = !interior.empty() && ev.margin >= delta;
    if (!ev.admissible && ev.worst_unknown >= 0) {
        try {
            const auto eig = hermitian_eigen(to_complex_hessian(hessian(u, ev.worst_unknown)));
            const auto e = sigma_all(eig.lambda.values());
            ev.worst_sigmas.assign(e.begin() + 1, e.begin() + 1 + k);
        } catch (const Error&) {
        }
    }

    if (jacobian) {
        Eigen::Map<const SpMat> view(nu, nu, static_cast<Eigen::Index>(inner.size()), row_start.data(),
                                     inner.data(), vals.data());
        *jacobian = view;
    }
    return ev;
}

Residual Discretization::residual(const ScalarField& u) const {
    if (&u.grid() != grid_.get()) throw ArgumentError("residual: field lives on a different grid");
    auto ev = evaluate(u.values(), nullptr);
    if (!ev.admissible) {
        std::ostringstream msg;
        msg << "field is not admissible at unknown " << ev.worst_unknown << " (min sigma " << ev.margin
            << " < margin " << problem_.tol.cone_margin << ")";
        throw AdmissibilityError(msg.str(), ev.worst_unknown, ev.worst_sigmas);
    }
    return std::move(ev.residual);
}

Residual residual(const ScalarField& u, const Discretization& disc) { return disc.residual(u); }

Diagnostics Discretization::diagnostics(const ScalarField& field) const {
    const auto u = field.values();
    const int m = grid_->dim();
    const double h = grid_->spacing();
    Diagnostics d;

    for (std::int32_t q = 0; q < grid_->num_unknowns(); ++q) {
        const std::int64_t p = grid_->point_of(q);
        const auto idx = grid_->multi_index(p);
        const int N = grid_->points_per_axis();
        double g2 = 0.0;
        for (int a = 0; a < m; ++a) {
            const std::int64_t s = grid_->stride(a);
            auto value = [&](int off) -> std::optional<double> {
                const int i = idx[a] + off;
                if (i < 0 || i >= N) return std::nullopt;
                const auto w = grid_->unknown_of(p + off * s);
                if (w < 0) return std::nullopt;
                return u[static_cast<std::size_t>(w)];
            };
            const auto plus = value(1), minus = value(-1);
            double g = 0.0;
            if (plus && minus) g = (*plus - *minus) / (2.0 * h);
            else if (plus) {
                const auto plus2 = value(2);
                g = plus2 ? (-3.0 * u[q] + 4.0 * *plus - *plus2) / (2.0 * h) : (*plus - u[q]) / h;
            } else if (minus) {
                const auto minus2 = value(-2);
                g = minus2 ? (3.0 * u[q] - 4.0 * *minus + *minus2) / (2.0 * h) : (u[q] - *minus) / h;
            }
            g2 += g * g;
        }
        d.sup_Du = std::max(d.sup_Du, std::sqrt(g2));
    }
    for (auto q : grid_->interior()) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hessian(u, q).entries, Eigen::EigenvaluesOnly);
        d.sup_D2u = std::max(d.sup_D2u, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    for (const auto& row : nn_rows_) d.max_Dnunu = std::max(d.max_Dnunu, std::abs(row.apply(u)));
    d.hessian_ratio = d.sup_D2u / (1.0 + d.max_Dnunu);
    return d;
}

// ---------------------------------------------------------------------------

ScalarField barrier_field(const Discretization& disc, bool shift_constant) {
    const auto& p = disc.problem();
    std::vector<double> sup(static_cast<std::size_t>(p.k));
    for (int l = 0; l < p.k; ++l) sup[l] = disc.alpha_sup(l);
    const double A = compute_A(p.n, p.k, sup);
    const auto& centre = disc.grid().domain().center;
    ScalarField w(disc.grid_ptr(), [&](std::span<const double> t) {
        double s = 0.0;
        for (std::size_t a = 0; a < t.size(); ++a) s += (t[a] - centre[a]) * (t[a] - centre[a]);
        return 2.0 * A * s;
    });
    if (shift_constant && p.eps > 0.0 && !disc.grid().band().empty()) {
        // A constant c shifts every boundary residual by eps * c.
        double mean = 0.0;
        for (std::size_t b = 0; b < disc.grid().band().size(); ++b)
            mean += disc.boundary_row(b).apply(w.values()) - disc.phi_at_band(b);
        mean /= static_cast<double>(disc.grid().band().size());
        for (auto& v : w.values()) v -= mean / p.eps;
    }
    return w;
}

namespace {

double merit(const Residual& r, double si, double sb) {
    double s = 0.0;
    for (double x : r.interior) s += (si * x) * (si * x);
    for (double x : r.boundary) s += (sb * x) * (sb * x);
    return 0.5 * s;
}

struct LinearSolve {
    Eigen::VectorXd x;
    int iterations = 0;
    double relative_residual = 0.0;
};

LinearSolve solve_linear(const SpMat& J, const Eigen::VectorXd& rhs, double tol) {
    LinearSolve out;
    const double bnorm = rhs.norm();
    if (bnorm == 0.0) {
        out.x = Eigen::VectorXd::Zero(rhs.size());
        return out;
    }
    auto attempt = [&](auto& solver) {
        solver.setTolerance(tol);
        solver.compute(J);
        if (solver.info() != Eigen::Success) return false;
        out.x = solver.solve(rhs);
        out.iterations = static_cast<int>(solver.iterations());
        out.relative_residual = (J * out.x - rhs).norm() / bnorm;
        return solver.info() == Eigen::Success && out.relative_residual <= 10.0 * tol;
    };
    // Jacobi-preconditioned BiCGSTAB handles these systems well; ILUT and a direct
    // factorization are fallbacks.
    Eigen::BiCGSTAB<SpMat, Eigen::DiagonalPreconditioner<double>> jacobi;
    jacobi.setMaxIterations(4000);
    if (attempt(jacobi)) return out;
    Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> ilut;
    ilut.preconditioner().setDroptol(1e-3);
    ilut.preconditioner().setFillfactor(2);
    ilut.setMaxIterations(2000);
    if (attempt(ilut)) return out;
    // Direct fallback.
    Eigen::SparseMatrix<double> Jc = J;
    Jc.makeCompressed();
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.compute(Jc);
    if (lu.info() != Eigen::Success) throw ConvergenceError("Newton: sparse factorization failed");
    out.x = lu.solve(rhs);
    out.iterations = -1;
    out.relative_residual = (J * out.x - rhs).norm() / bnorm;
    if (!(out.relative_residual <= 10.0 * tol))
        throw ConvergenceError("Newton: linear solve did not reach the requested accuracy");
    return out;
}

}  // namespace

SolveReport newton_solve(const Discretization& disc, const ScalarField& u0) {
    const auto& p = disc.problem();
    if (!(p.eps > 0.0)) throw ArgumentError("newton_solve: eps must be positive");
    if (&u0.grid() != &disc.grid()) throw ArgumentError("newton_solve: initial field lives on a different grid");

    const double si = disc.interior_scale(), sb = disc.boundary_scale();
    const auto& interior = disc.grid().interior();
    const auto& band = disc.grid().band();
    std::vector<double> u(u0.values().begin(), u0.values().end());

    SpMat J;
    auto ev = disc.evaluate(u, &J);
    if (!ev.admissible) {
        std::ostringstream msg;
        msg << "initial guess is not admissible (min sigma " << ev.margin << " at unknown " << ev.worst_unknown << ")";
        throw AdmissibilityError(msg.str(), ev.worst_unknown, ev.worst_sigmas);
    }
    double f = merit(ev.residual, si, sb);

    SolveReport report;
    int it = 0;
    for (;; ++it) {
        const double maxres = std::max(ev.residual.interior_max(), ev.residual.boundary_max());
        if (maxres <= p.tol.residual_tol) break;
        if (it >= p.tol.max_iterations) {
            std::ostringstream msg;
            msg << "Newton: no convergence in " << p.tol.max_iterations << " iterations (max residual " << maxres << ")";
            throw ConvergenceError(msg.str());
        }

        Eigen::VectorXd rhs(disc.grid().num_unknowns());
        for (std::size_t i = 0; i < interior.size(); ++i) rhs[interior[i]] = -si * ev.residual.interior[i];
        for (std::size_t b = 0; b < band.size(); ++b) rhs[band[b].unknown] = -sb * ev.residual.boundary[b];
        const auto lin = solve_linear(J, rhs, p.tol.linear_tol);

        double step = 1.0;
        std::vector<double> trial(u.size());
        Discretization::Evaluation tev;
        double ft = 0.0;
        for (;;) {
            for (std::size_t j = 0; j < u.size(); ++j) trial[j] = u[j] + step * lin.x[static_cast<Eigen::Index>(j)];
            tev = disc.evaluate(trial, nullptr);
            if (tev.admissible) {
                ft = merit(tev.residual, si, sb);
                if (ft <= (1.0 - 2.0 * p.tol.armijo * step) * f) break;
            }
            step *= 0.5;
            if (step < p.tol.min_step) {
                std::ostringstream msg;
                msg << "Newton: line search stalled at iteration " << it << " (merit " << f
                    << ", max residual " << maxres << ", admissible trial: " << (tev.admissible ? "yes" : "no") << ")";
                throw ConvergenceError(msg.str());
            }
        }
        u.swap(trial);
        ev = disc.evaluate(u, &J);
        f = merit(ev.residual, si, sb);
        report.history.push_back(IterationRecord{f, std::max(ev.residual.interior_max(), ev.residual.boundary_max()),
                                                 step, ev.margin, lin.iterations});
    }

    report.iterations = it;
    report.interior_residual = ev.residual.interior_max();
    report.boundary_residual = ev.residual.boundary_max();
    report.margin = ev.margin;
    report.solution = ScalarField(disc.grid_ptr(), std::move(u));
    report.diagnostics = disc.diagnostics(report.solution);
    return report;
}

// ---------------------------------------------------------------------------

double extrapolate_to_zero(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw ArgumentError("extrapolate_to_zero: mismatched input");
    double v = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        double l = 1.0;
        for (std::size_t m = 0; m < x.size(); ++m)
            if (m != j) l *= (0.0 - x[m]) / (x[j] - x[m]);
        v += l * y[j];
    }
    return v;
}

ContinuationResult continue_epsilon(const ProblemData& problem, std::shared_ptr<const Grid> grid,
                                    std::span<const double> schedule) {
    if (schedule.empty()) throw ArgumentError("continue_epsilon: empty schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (!(schedule[i] > 0.0)) throw ArgumentError("continue_epsilon: schedule entries must be positive");
        if (i > 0 && !(schedule[i] < schedule[i - 1]))
            throw ArgumentError("continue_epsilon: schedule must be strictly decreasing");
    }

    ContinuationResult result;
    std::optional<ScalarField> previous;
    double previous_eps = 0.0;
    for (double eps : schedule) {
        ProblemData p = problem;
        p.eps = eps;
        try {
            Discretization disc(grid, p);
            ScalarField start;
            if (!previous) {
                start = barrier_field(disc);
            } else {
                // u^eps ~ -c/eps + v: rescale the constant part of the previous solution.
                const double m = previous->mean();
                std::vector<double> v(previous->values().begin(), previous->values().end());
                for (auto& x : v) x = x - m + m * previous_eps / eps;
                start = ScalarField(grid, std::move(v));
            }
            ContinuationStep step;
            step.eps = eps;
            step.report = newton_solve(disc, start);
            step.c_eps = -eps * step.report.solution.mean();
            previous = step.report.solution;
            previous_eps = eps;
            result.steps.push_back(std::move(step));
        } catch (const Error& e) {
            std::ostringstream msg;
            msg << "continuation stopped at eps = " << eps << ": " << e.what();
            result.failure = msg.str();
            break;
        }
    }
    if (result.steps.empty()) return result;

    const std::size_t m = std::min<std::size_t>(3, result.steps.size());
    std::vector<double> xs, ys;
    for (std::size_t i = result.steps.size() - m; i < result.steps.size(); ++i) {
        xs.push_back(result.steps[i].eps);
        ys.push_back(result.steps[i].c_eps);
    }
    result.c = extrapolate_to_zero(xs, ys);
    const auto& last = result.steps.back().report.solution;
    const double mean = last.mean();
    std::vector<double> v(last.values().begin(), last.values().end());
    for (auto& x : v) x -= mean;
    result.v = ScalarField(grid, std::move(v));
    return result;
}

}  // namespace mixhess
