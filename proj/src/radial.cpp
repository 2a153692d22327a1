#include "mixhess/radial.hpp"

#include "mixhess/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mixhess {

double radial_sigma(int m, double g, double sg_prime, int n) {
    if (n < 2) throw ArgumentError("radial_sigma: need n >= 2");
    if (m < 0 || m > n) return 0.0;
    double v = binomial(n - 1, m) * std::pow(g, m);
    if (m >= 1) v += binomial(n - 1, m - 1) * std::pow(g, m - 1) * sg_prime;
    return v;
}

void RadialProblem::validate() const {
    if (n < 2) throw ArgumentError("radial: need n >= 2");
    if (k < 2 || k > n) throw ArgumentError("radial: need 2 <= k <= n");
    if (!(R > 0.0)) throw ArgumentError("radial: need R > 0");
    if (static_cast<int>(alpha.size()) != k) throw ArgumentError("radial: need alpha_0..alpha_{k-1}");
    for (const auto& a : alpha)
        if (a.empty()) throw ArgumentError("radial: empty coefficient polynomial");
    if (!(start_fraction > 0.0 && start_fraction < 1.0)) throw ArgumentError("radial: start_fraction must lie in (0, 1)");
    if (!(profile_tol > 0.0) || !(degeneracy_tol >= 0.0)) throw ArgumentError("radial: invalid tolerances");
    const double R2 = R * R;
    for (int l = 0; l < k; ++l)
        for (int j = 0; j <= 64; ++j)
            if (!(alpha_at(l, R2 * j / 64.0) > 0.0)) throw ArgumentError("radial: coefficients must be positive on [0, R^2]");
}

double RadialProblem::alpha_at(int l, double s) const { return eval_polynomial(alpha[l], s); }

double radial_slope(const RadialProblem& p, double g, double s) {
    const int n = p.n, k = p.k;
    double num = -binomial(n - 1, k) * std::pow(g, k);
    double den = binomial(n - 1, k - 1) * std::pow(g, k - 1);
    for (int l = 0; l < k; ++l) {
        const double a = p.alpha_at(l, s);
        num += a * binomial(n - 1, l) * std::pow(g, l);
        if (l >= 1) den -= a * binomial(n - 1, l - 1) * std::pow(g, l - 1);
    }
    if (!(den > p.degeneracy_tol)) {
        std::ostringstream msg;
        msg << "radial ellipticity coefficient " << den << " degenerates at s = " << s;
        throw NumericError(msg.str());
    }
    return num / den;
}

double radial_g0(const RadialProblem& p) {
    p.validate();
    auto closure = [&](double g) {
        double v = binomial(p.n, p.k) * std::pow(g, p.k);
        for (int l = 0; l < p.k; ++l) v -= p.alpha_at(l, 0.0) * binomial(p.n, l) * std::pow(g, l);
        return v;
    };
    double hi = 1.0;
    while (closure(hi) <= 0.0) {
        hi *= 2.0;
        if (hi > 1e150) throw NumericError("radial_g0: no positive root found");
    }
    double lo = 0.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (closure(mid) > 0.0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

namespace {

struct Table {
    std::vector<double> s, g, F;
};

void check_admissible(const RadialProblem& p, double g, double mu, double s) {
    std::vector<double> lambda(static_cast<std::size_t>(p.n), g);
    lambda[0] = mu;
    if (!(cone_margin(p.k, lambda) > 0.0)) {
        std::ostringstream msg;
        msg << "radial profile leaves the cone at s = " << s;
        throw NumericError(msg.str());
    }
}

// March with `steps` RK4 steps in x = ln s from s0 to R^2.
Table integrate(const RadialProblem& p, double g0, double gp0, int steps) {
    const double R2 = p.R * p.R;
    const double s0 = p.start_fraction * R2;
    const double x0 = std::log(s0), x1 = std::log(R2);
    const double dx = (x1 - x0) / steps;

    Table t;
    t.s.reserve(static_cast<std::size_t>(steps) + 2);
    t.s.push_back(0.0);
    t.g.push_back(g0);
    t.F.push_back(0.0);

    double g = g0 + gp0 * s0;
    double F = g0 * s0 + 0.5 * gp0 * s0 * s0;
    // d/dx g = s g' = (sg)' - g, d/dx F = s g.
    auto rhs = [&](double x, double gv, double& dg, double& dF) {
        const double s = std::exp(x);
        dg = radial_slope(p, gv, s) - gv;
        dF = s * gv;
    };
    auto record = [&](double x) {
        const double s = std::exp(x);
        check_admissible(p, g, radial_slope(p, g, s), s);
        t.s.push_back(s);
        t.g.push_back(g);
        t.F.push_back(F);
    };
    record(x0);
    for (int i = 0; i < steps; ++i) {
        const double x = x0 + i * dx;
        double k1g, k1F, k2g, k2F, k3g, k3F, k4g, k4F;
        rhs(x, g, k1g, k1F);
        rhs(x + 0.5 * dx, g + 0.5 * dx * k1g, k2g, k2F);
        rhs(x + 0.5 * dx, g + 0.5 * dx * k2g, k3g, k3F);
        rhs(x + dx, g + dx * k3g, k4g, k4F);
        g += dx / 6.0 * (k1g + 2.0 * k2g + 2.0 * k3g + k4g);
        F += dx / 6.0 * (k1F + 2.0 * k2F + 2.0 * k3F + k4F);
        record(i + 1 == steps ? x1 : x0 + (i + 1) * dx);
    }
    t.s.back() = R2;
    return t;
}

}  // namespace

RadialProfile march(const RadialProblem& p) {
    const double g0 = radial_g0(p);
    check_admissible(p, g0, g0, 0.0);

    // Taylor start: differentiating s g' = mu(g, s) - g at s = 0 gives g'(0) = mu_s / (2 - mu_g).
    const double dg = 1e-6 * std::max(1.0, g0);
    const double ds = 1e-6 * p.R * p.R;
    const double mu_g = (radial_slope(p, g0 + dg, 0.0) - radial_slope(p, g0 - dg, 0.0)) / (2.0 * dg);
    const double mu_s = (radial_slope(p, g0, ds) - radial_slope(p, g0, 0.0)) / ds;
    if (!(2.0 - mu_g > p.degeneracy_tol)) throw NumericError("radial: singular Taylor start at s = 0");
    const double gp0 = mu_s / (2.0 - mu_g);

    int steps = 256;
    Table coarse = integrate(p, g0, gp0, steps);
    for (;;) {
        if (steps > (1 << 22)) throw NumericError("radial: step halving did not reach the profile tolerance");
        Table fine = integrate(p, g0, gp0, 2 * steps);
        double change = 0.0;
        for (std::size_t i = 1; i < coarse.s.size(); ++i) {
            const std::size_t j = 2 * (i - 1) + 1;
            change = std::max(change, std::abs(fine.g[j] - coarse.g[i]));
            change = std::max(change, std::abs(fine.F[j] - coarse.F[i]));
        }
        steps *= 2;
        coarse = std::move(fine);
        if (change <= p.profile_tol) break;
    }

    RadialProfile prof;
    prof.problem_ = p;
    prof.s_ = std::move(coarse.s);
    prof.g_ = std::move(coarse.g);
    prof.F_ = std::move(coarse.F);
    prof.steps_ = steps;
    return prof;
}

namespace {

// Index i with s[i] <= x <= s[i+1].
std::size_t locate(const std::vector<double>& s, double x) {
    if (!(x >= 0.0) || x > s.back() * (1.0 + 1e-12))
        throw ArgumentError("radial profile: s outside [0, R^2]");
    auto it = std::upper_bound(s.begin(), s.end(), x);
    std::size_t i = static_cast<std::size_t>(it - s.begin());
    if (i == 0) i = 1;
    if (i >= s.size()) i = s.size() - 1;
    return i - 1;
}

}  // namespace

double RadialProfile::F_at(double x) const {
    const std::size_t i = locate(s_, x);
    const double a = s_[i], b = s_[i + 1], w = b - a;
    const double t = (x - a) / w;
    const double h00 = (1 + 2 * t) * (1 - t) * (1 - t), h10 = t * (1 - t) * (1 - t);
    const double h01 = t * t * (3 - 2 * t), h11 = t * t * (t - 1);
    return h00 * F_[i] + h10 * w * g_[i] + h01 * F_[i + 1] + h11 * w * g_[i + 1];
}

double RadialProfile::g_at(double x) const {
    const std::size_t i = locate(s_, x);
    const double a = s_[i], b = s_[i + 1], w = b - a;
    const double t = (x - a) / w;
    // Derivative of the Hermite interpolant of F.
    const double d00 = 6 * t * t - 6 * t, d10 = 3 * t * t - 4 * t + 1;
    const double d01 = -6 * t * t + 6 * t, d11 = 3 * t * t - 2 * t;
    return (d00 * F_[i] + d01 * F_[i + 1]) / w + d10 * g_[i] + d11 * g_[i + 1];
}

RadialClosure radial_neumann(const RadialProfile& profile, double eps, double phi) {
    if (!(eps >= 0.0)) throw ArgumentError("radial_neumann: eps must be >= 0");
    if (!std::isfinite(phi)) throw ArgumentError("radial_neumann: phi must be finite");
    const double R = profile.problem().R;
    const double flux = 2.0 * R * profile.g_end();
    RadialClosure c;
    c.eps = eps;
    if (eps == 0.0) c.c = flux - phi;
    else c.f0 = (phi - flux) / eps - profile.F_end();
    return c;
}

ScalarField lift_to_grid(const RadialProfile& profile, double f0, std::shared_ptr<const Grid> grid) {
    if (!grid) throw ArgumentError("lift_to_grid: null grid");
    const auto& d = grid->domain();
    if (d.kind != DomainKind::ball || d.n != profile.problem().n ||
        std::abs(d.radii[0] - profile.problem().R) > 1e-12 * profile.problem().R)
        throw ArgumentError("lift_to_grid: grid domain is not the profile's ball");
    const double R2 = profile.problem().R * profile.problem().R;
    const auto& c = d.center;
    return ScalarField(grid, [&](std::span<const double> t) {
        double s = 0.0;
        for (std::size_t a = 0; a < t.size(); ++a) s += (t[a] - c[a]) * (t[a] - c[a]);
        return f0 + profile.F_at(std::min(s, R2));
    });
}

}  // namespace mixhess
