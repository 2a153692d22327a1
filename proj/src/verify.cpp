#include "mixhess/verify.hpp"

#include "mixhess/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace mixhess {

double barrier_operator_value(int n, int k, std::span<const double> sup_alphas, double A) {
    const double ck1 = binomial(n, k - 1);
    double v = 2.0 * A * binomial(n, k) / ck1;
    for (int l = 0; l <= k - 2; ++l) v -= sup_alphas[l] * std::pow(2.0 * A, -(k - 1 - l)) * binomial(n, l) / ck1;
    return v;
}

double compute_A(int n, int k, std::span<const double> sup_alphas) {
    if (k < 2 || k > n) throw ArgumentError("compute_A: need 2 <= k <= n");
    if (static_cast<int>(sup_alphas.size()) < k) throw ArgumentError("compute_A: need sup alpha_0..alpha_{k-1}");
    for (int l = 0; l < k; ++l)
        if (!(sup_alphas[l] > 0.0)) throw ArgumentError("compute_A: sup-norms must be positive");
    const double target = sup_alphas[k - 1];
    auto ok = [&](double A) { return barrier_operator_value(n, k, sup_alphas, A) >= target; };
    double hi = 1.0;
    while (!ok(hi)) hi *= 2.0;
    double lo = hi / 2.0;
    while (ok(lo) && lo > 1e-300) lo /= 2.0;
    while (hi - lo > 1e-10 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (ok(mid) ? hi : lo) = mid;
    }
    return hi;
}

double compute_M0(int n, int k, std::span<const double> sup_alphas, double max_phi, double diam) {
    if (!(max_phi >= 0.0) || !(diam >= 0.0)) throw ArgumentError("compute_M0: need max|phi| >= 0 and diam >= 0");
    const double A = compute_A(n, k, sup_alphas);
    return std::max(max_phi, max_phi + 2.0 * A * diam + A * diam * diam);
}

std::string EstimateReport::first_failure() const {
    if (!c0.ok) return "c0";
    if (!ratios.ok) return "ratios";
    if (!traces.ok) return "traces";
    if (!barrier.ok) return "barrier";
    return {};
}

namespace {

// Tracks the smallest bound - value over a set of points.
struct Tracker {
    CheckResult result{true, std::numeric_limits<double>::infinity(), {}};
    void offer(const Grid& g, std::int32_t unknown, double value, double bound, double slack) {
        const double margin = bound - value;
        if (margin < result.margin) {
            result.margin = margin;
            result.worst = PointRecord{unknown, g.unknown_coords(unknown), value, bound};
        }
        if (!(margin >= -slack)) result.ok = false;
    }
};

}  // namespace

EstimateReport check_field(const ScalarField& u, const Discretization& disc) {
    EstimateReport r;
    const auto& grid = disc.grid();
    const auto& p = disc.problem();
    const int n = p.n, k = p.k;
    if (&u.grid() != &grid) throw ArgumentError("check_field: field lives on a different grid");

    std::vector<double> sup(static_cast<std::size_t>(k)), inf(static_cast<std::size_t>(k));
    double sup_sum = 0.0;
    for (int l = 0; l < k; ++l) {
        sup[l] = disc.alpha_sup(l);
        inf[l] = disc.alpha_inf(l);
        sup_sum += sup[l];
    }
    r.A_barrier = compute_A(n, k, sup);
    r.M0 = compute_M0(n, k, sup, disc.phi_max_abs(), grid.domain().diam());
    r.slack_c0 = 10.0 * grid.spacing();

    // C0 bound.
    Tracker c0;
    const auto vals = u.values();
    for (std::int32_t q = 0; q < grid.num_unknowns(); ++q) {
        const double v = std::abs(p.eps * vals[q]);
        r.sup_eps_u = std::max(r.sup_eps_u, v);
        c0.offer(grid, q, v, r.M0 + r.slack_c0, 0.0);
    }
    r.c0 = c0.result;

    // Pointwise ratio and trace bounds through the solver's own evaluation path.
    const auto b = ratio_bounds(n, k, inf, sup_sum);
    const double trace_lo = static_cast<double>(n - k + 1) / k;
    const double trace_hi = n - k + 1;
    double weighted_hi = sup[k - 1];
    for (int l = 0; l <= k - 2; ++l) weighted_hi += (k - l) * sup[l] * b.ratio_uppers[l];
    constexpr double slack = 1e-6;

    Tracker l26, l27;
    std::vector<double> scratch;
    for (auto q : grid.interior()) {
        const auto alpha = disc.alpha_at(q, scratch);
        OperatorJet jet;
        try {
            jet = g_jet(k, alpha, to_complex_hessian(disc.hessian(vals, q)));
        } catch (const DomainError&) {
            l26.offer(grid, q, std::numeric_limits<double>::infinity(), 0.0, slack);
            l27.offer(grid, q, std::numeric_limits<double>::infinity(), 0.0, slack);
            continue;
        }
        const double top = jet.ratios[k];
        l26.offer(grid, q, b.lower, top, slack * (1.0 + b.lower));
        l26.offer(grid, q, top, b.upper, slack * (1.0 + b.upper));
        for (int l = 0; l <= k - 2; ++l)
            l26.offer(grid, q, jet.ratios[l], b.ratio_uppers[l], slack * (1.0 + b.ratio_uppers[l]));

        const auto t = trace_values(k, alpha, jet.eig);
        l27.offer(grid, q, trace_lo, t.trace, slack);
        l27.offer(grid, q, t.trace, trace_hi, slack);
        l27.offer(grid, q, alpha[k - 1], t.weighted, slack * (1.0 + alpha[k - 1]));
        l27.offer(grid, q, t.weighted, weighted_hi, slack * (1.0 + weighted_hi));
    }
    r.ratios = l26.result;
    r.traces = l27.result;

    // Comparison with the barrier: u - 2A|t - t1|^2 takes its grid minimum on the band.
    const auto& centre = grid.domain().center;
    auto shifted = [&](std::int32_t q) {
        const auto t = grid.unknown_coords(q);
        double s = 0.0;
        for (std::size_t a = 0; a < t.size(); ++a) s += (t[a] - centre[a]) * (t[a] - centre[a]);
        return vals[q] - 2.0 * r.A_barrier * s;
    };
    double global_min = std::numeric_limits<double>::infinity();
    for (std::int32_t q = 0; q < grid.num_unknowns(); ++q) global_min = std::min(global_min, shifted(q));
    double band_min = std::numeric_limits<double>::infinity();
    std::int32_t band_arg = -1;
    for (const auto& bp : grid.band()) {
        const double v = shifted(bp.unknown);
        if (v < band_min) {
            band_min = v;
            band_arg = bp.unknown;
        }
    }
    const double bound = global_min + 1e-8 * (1.0 + std::abs(global_min));
    r.barrier.ok = band_arg >= 0 && band_min <= bound;
    r.barrier.margin = bound - band_min;
    if (band_arg >= 0) r.barrier.worst = PointRecord{band_arg, grid.unknown_coords(band_arg), band_min, bound};

    const auto d = disc.diagnostics(u);
    r.sup_Du = d.sup_Du;
    r.sup_D2u = d.sup_D2u;
    r.max_Dnunu = d.max_Dnunu;
    r.hessian_ratio = d.hessian_ratio;
    return r;
}

EstimateReport check_solution(const SolveReport& report, const Discretization& disc) {
    return check_field(report.solution, disc);
}

void enforce(const EstimateReport& report) {
    const auto name = report.first_failure();
    if (name.empty()) return;
    const CheckResult& c = name == "c0" ? report.c0 : name == "ratios" ? report.ratios
                         : name == "traces" ? report.traces : report.barrier;
    std::ostringstream msg;
    msg << "bound '" << name << "' violated at unknown " << c.worst.unknown << " (value " << c.worst.value
        << ", bound " << c.worst.bound << ", point";
    for (double x : c.worst.coords) msg << ' ' << x;
    msg << ')';
    throw VerificationError(msg.str());
}

}  // namespace mixhess
