#include "mixhess/geom.hpp"

#include "mixhess/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mixhess {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

}  // namespace

DomainSpec DomainSpec::ball(int n, double radius, std::vector<double> center) {
    DomainSpec d;
    d.kind = DomainKind::ball;
    d.n = n;
    d.center = center.empty() ? std::vector<double>(static_cast<std::size_t>(2 * n), 0.0) : std::move(center);
    d.radii = {radius};
    d.validate();
    return d;
}

DomainSpec DomainSpec::ellipsoid(int n, std::vector<double> radii, std::vector<double> center) {
    DomainSpec d;
    d.kind = DomainKind::ellipsoid;
    d.n = n;
    d.center = center.empty() ? std::vector<double>(static_cast<std::size_t>(2 * n), 0.0) : std::move(center);
    d.radii = std::move(radii);
    d.validate();
    return d;
}

void DomainSpec::validate() const {
    if (n < 1) throw ArgumentError("domain: n must be >= 1");
    if (static_cast<int>(center.size()) != dim()) throw ArgumentError("domain: center must have 2n entries");
    const std::size_t want = kind == DomainKind::ball ? 1u : static_cast<std::size_t>(dim());
    if (radii.size() != want) throw ArgumentError("domain: wrong number of radii");
    for (double r : radii)
        if (!(r > 0.0) || !std::isfinite(r)) throw ArgumentError("domain: radii must be positive");
    for (double c : center)
        if (!std::isfinite(c)) throw ArgumentError("domain: non-finite center");
}

double DomainSpec::max_semi_axis() const { return *std::max_element(radii.begin(), radii.end()); }
double DomainSpec::min_semi_axis() const { return *std::min_element(radii.begin(), radii.end()); }

double DomainSpec::k0() const {
    // Defining function q / max_{boundary}|Dq| with q = sum (t_a-c_a)^2/a_a^2 - 1;
    // its complex Hessian is diagonal with entries (1/a_j^2 + 1/a_{n+j}^2)/2.
    double best = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
        const double aj = semi_axis(j), anj = semi_axis(n + j);
        best = std::min(best, 0.5 * (1.0 / (aj * aj) + 1.0 / (anj * anj)));
    }
    return best / (2.0 / min_semi_axis());
}

double DomainSpec::kappa_min() const {
    const double amax = max_semi_axis();
    return min_semi_axis() / (amax * amax);
}

double DomainSpec::diam() const { return 2.0 * max_semi_axis(); }

std::string to_string(DomainKind kind) { return kind == DomainKind::ball ? "ball" : "ellipsoid"; }

DefiningValue defining_function(const DomainSpec& d, std::span<const double> t) {
    const int m = d.dim();
    if (static_cast<int>(t.size()) != m) throw ArgumentError("defining_function: point has wrong dimension");
    DefiningValue out;
    out.gradient.assign(static_cast<std::size_t>(m), 0.0);
    out.normal.assign(static_cast<std::size_t>(m), 0.0);
    if (d.kind == DomainKind::ball) {
        std::vector<double> y(static_cast<std::size_t>(m));
        for (int a = 0; a < m; ++a) y[a] = t[a] - d.center[a];
        const double rho = norm2(y);
        out.r = rho - d.radii[0];
        if (rho > 0.0) {
            for (int a = 0; a < m; ++a) out.gradient[a] = out.normal[a] = y[a] / rho;
        }
        return out;
    }
    double q = 0.0;
    for (int a = 0; a < m; ++a) {
        const double y = t[a] - d.center[a];
        const double aa = d.semi_axis(a);
        q += y * y / (aa * aa);
        out.gradient[a] = 2.0 * y / (aa * aa);
    }
    out.r = q - 1.0;
    const double g = norm2(out.gradient);
    if (g > 0.0)
        for (int a = 0; a < m; ++a) out.normal[a] = out.gradient[a] / g;
    return out;
}

bool contains(const DomainSpec& d, std::span<const double> t) {
    double q = 0.0;
    for (int a = 0; a < d.dim(); ++a) {
        const double y = (t[a] - d.center[a]) / d.semi_axis(a);
        q += y * y;
    }
    return q <= 1.0 + 1e-12;
}

BoundaryFoot project_to_boundary(const DomainSpec& d, std::span<const double> t) {
    const int m = d.dim();
    std::vector<double> y(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) y[a] = t[a] - d.center[a];
    BoundaryFoot foot;
    foot.point.resize(static_cast<std::size_t>(m));
    foot.normal.resize(static_cast<std::size_t>(m));

    if (d.kind == DomainKind::ball) {
        const double rho = norm2(y);
        const double R = d.radii[0];
        for (int a = 0; a < m; ++a) foot.normal[a] = rho > 0.0 ? y[a] / rho : (a == 0 ? 1.0 : 0.0);
        for (int a = 0; a < m; ++a) foot.point[a] = d.center[a] + R * foot.normal[a];
        foot.depth = R - rho;
        return foot;
    }

    // Closest point x_a = a_a^2 y_a / (a_a^2 + mu) with sum x_a^2/a_a^2 = 1, mu in (-a_min^2, 0].
    const double amin = d.min_semi_axis();
    auto residual = [&](double mu) {
        double s = 0.0;
        for (int a = 0; a < m; ++a) {
            const double aa = d.semi_axis(a) * d.semi_axis(a);
            const double x = d.semi_axis(a) * y[a] / (aa + mu);
            s += x * x;
        }
        return s - 1.0;
    };
    double lo = -amin * amin, hi = 0.0;
    if (residual(hi) > 0.0) {
        // Outside the closed domain: bracket to the right.
        hi = 1.0;
        while (residual(hi) > 0.0) hi *= 2.0;
        lo = 0.0;
    }
    const double near_lo = lo + 1e-15 * std::max(1.0, std::abs(lo));
    std::vector<double> x(static_cast<std::size_t>(m));
    if (lo < 0.0 && residual(near_lo) <= 0.0) {
        // Degenerate: the minimizer leaves the smooth branch along the shortest axis.
        int amin_axis = 0;
        for (int a = 0; a < m; ++a)
            if (d.semi_axis(a) < d.semi_axis(amin_axis)) amin_axis = a;
        double rest = 0.0;
        for (int a = 0; a < m; ++a) {
            if (a == amin_axis) continue;
            const double aa = d.semi_axis(a) * d.semi_axis(a);
            const double gap = aa - amin * amin;
            x[a] = gap > 1e-14 * aa ? aa * y[a] / gap : 0.0;
            rest += x[a] * x[a] / aa;
        }
        x[amin_axis] = amin * std::sqrt(std::max(0.0, 1.0 - rest)) * (y[amin_axis] < 0.0 ? -1.0 : 1.0);
    } else {
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (residual(mid) > 0.0) lo = mid; else hi = mid;
            if (hi - lo < 1e-16 * std::max(1.0, std::abs(hi))) break;
        }
        const double mu = 0.5 * (lo + hi);
        for (int a = 0; a < m; ++a) {
            const double aa = d.semi_axis(a) * d.semi_axis(a);
            x[a] = aa * y[a] / (aa + mu);
        }
    }
    double dist = 0.0;
    for (int a = 0; a < m; ++a) {
        foot.point[a] = d.center[a] + x[a];
        dist += (x[a] - y[a]) * (x[a] - y[a]);
    }
    const auto dv = defining_function(d, foot.point);
    foot.normal = dv.normal;
    foot.depth = contains(d, t) ? std::sqrt(dist) : -std::sqrt(dist);
    return foot;
}

std::vector<int> Grid::multi_index(std::int64_t point) const {
    std::vector<int> idx(static_cast<std::size_t>(dim()));
    for (int a = 0; a < dim(); ++a) {
        idx[a] = static_cast<int>(point / strides_[a]);
        point %= strides_[a];
    }
    return idx;
}

std::vector<double> Grid::coords(std::int64_t point) const {
    auto idx = multi_index(point);
    std::vector<double> t(static_cast<std::size_t>(dim()));
    for (int a = 0; a < dim(); ++a) t[a] = lo_[a] + h_ * idx[a];
    return t;
}

std::int64_t Grid::count(PointClass c) const {
    return std::count(klass_.begin(), klass_.end(), c);
}

namespace {

struct SampleBuilder {
    const Grid& grid;

    std::int32_t unknown_at(const std::vector<int>& idx) const {
        std::int64_t p = 0;
        for (int a = 0; a < grid.dim(); ++a) {
            if (idx[a] < 0 || idx[a] >= grid.points_per_axis()) return -1;
            p += idx[a] * grid.stride(a);
        }
        return grid.unknown_of(p);
    }

    NormalSample build(std::vector<double> position, double depth, bool correct) const {
        const int m = grid.dim();
        const int N = grid.points_per_axis();
        const double h = grid.spacing();
        NormalSample s;
        s.depth = depth;
        s.position = std::move(position);
        std::vector<int> base(static_cast<std::size_t>(m));
        std::vector<double> theta(static_cast<std::size_t>(m));
        for (int a = 0; a < m; ++a) {
            const double x = (s.position[a] - grid.lower()[a]) / h;
            int i = static_cast<int>(std::floor(x));
            i = std::clamp(i, 0, N - 2);
            base[a] = i;
            theta[a] = std::clamp(x - i, 0.0, 1.0);
        }
        const std::uint32_t corners = 1u << m;
        std::vector<int> idx(static_cast<std::size_t>(m));
        for (std::uint32_t c = 0; c < corners; ++c) {
            double w = 1.0;
            for (int a = 0; a < m; ++a) {
                const bool up = (c >> a) & 1u;
                idx[a] = base[a] + (up ? 1 : 0);
                w *= up ? theta[a] : 1.0 - theta[a];
            }
            if (w == 0.0) continue;
            const auto u = unknown_at(idx);
            if (u < 0) throw ArgumentError("build_grid: normal sample cell reaches outside the domain; refine the grid");
            s.multilinear.emplace_back(u, w);
        }
        if (!correct) return s;

        // Subtract h^2/2 theta(1-theta) u_aa with u_aa from a three-point second difference.
        std::vector<int> nearest(static_cast<std::size_t>(m));
        for (int a = 0; a < m; ++a) nearest[a] = base[a] + (theta[a] >= 0.5 ? 1 : 0);
        for (int a = 0; a < m; ++a) {
            const double coef = -0.5 * theta[a] * (1.0 - theta[a]);
            if (coef == 0.0) continue;
            const int candidates[3] = {nearest[a], base[a], base[a] + 1};
            bool placed = false;
            for (int centre : candidates) {
                auto at = nearest;
                std::int32_t u3[3];
                bool ok = true;
                for (int o = -1; o <= 1 && ok; ++o) {
                    at[a] = centre + o;
                    u3[o + 1] = unknown_at(at);
                    ok = u3[o + 1] >= 0;
                }
                if (!ok) continue;
                s.correction.emplace_back(u3[0], coef);
                s.correction.emplace_back(u3[1], -2.0 * coef);
                s.correction.emplace_back(u3[2], coef);
                placed = true;
                break;
            }
            if (!placed)
                throw ArgumentError("build_grid: no room for the second-difference correction; refine the grid");
        }
        return s;
    }
};

}  // namespace

Grid build_grid(const DomainSpec& d, int N, double half_width, const GridOptions& options) {
    d.validate();
    if (N < 9 || N % 2 == 0) throw ArgumentError("build_grid: N must be odd and >= 9");
    if (!(options.sample_spacing >= 1.0)) throw ArgumentError("build_grid: sample_spacing must be >= 1");
    const int m = d.dim();
    for (int a = 0; a < m; ++a)
        if (!(d.semi_axis(a) < half_width))
            throw ArgumentError("build_grid: domain not contained in the bounding box");
    const double total = std::pow(static_cast<double>(N), m);
    if (total > 6e7) throw ArgumentError("build_grid: grid too large (N^{2n} > 6e7)");

    Grid g;
    g.domain_ = d;
    g.N_ = N;
    g.half_width_ = half_width;
    g.h_ = 2.0 * half_width / (N - 1);
    g.options_ = options;
    g.lo_.resize(static_cast<std::size_t>(m));
    for (int a = 0; a < m; ++a) g.lo_[a] = d.center[a] - half_width;
    g.strides_.assign(static_cast<std::size_t>(m), 1);
    for (int a = m - 2; a >= 0; --a) g.strides_[a] = g.strides_[a + 1] * N;
    const auto npts = static_cast<std::int64_t>(total);

    std::vector<std::uint8_t> inside(static_cast<std::size_t>(npts), 0);
    for (std::int64_t p = 0; p < npts; ++p) inside[p] = contains(d, g.coords(p)) ? 1 : 0;

    // Interior: the full second-order stencil (p +- h e_a, p +- h e_a +- h e_b) stays in the closed domain.
    std::vector<std::int64_t> offsets;
    for (int a = 0; a < m; ++a) {
        offsets.push_back(g.strides_[a]);
        offsets.push_back(-g.strides_[a]);
        for (int b = a + 1; b < m; ++b)
            for (int sa : {-1, 1})
                for (int sb : {-1, 1}) offsets.push_back(sa * g.strides_[a] + sb * g.strides_[b]);
    }
    g.klass_.assign(static_cast<std::size_t>(npts), PointClass::exterior);
    g.unknown_.assign(static_cast<std::size_t>(npts), -1);
    for (std::int64_t p = 0; p < npts; ++p) {
        if (!inside[p]) continue;
        const auto idx = g.multi_index(p);
        bool full = true;
        for (int a = 0; a < m && full; ++a) full = idx[a] > 0 && idx[a] < N - 1;
        for (std::size_t o = 0; o < offsets.size() && full; ++o) full = inside[p + offsets[o]] != 0;
        g.klass_[p] = full ? PointClass::interior : PointClass::band;
        g.unknown_[p] = static_cast<std::int32_t>(g.points_.size());
        if (full) g.interior_.push_back(static_cast<std::int32_t>(g.points_.size()));
        g.points_.push_back(p);
    }

    SampleBuilder builder{g};
    const double spacing = options.sample_spacing * g.h_;
    for (std::int64_t p = 0; p < npts; ++p) {
        if (g.klass_[p] != PointClass::band) continue;
        BandPoint b;
        b.point = p;
        b.unknown = g.unknown_[p];
        const auto t = g.coords(p);
        auto foot = project_to_boundary(d, t);
        b.foot = foot.point;
        b.normal = foot.normal;
        b.depth = std::max(0.0, foot.depth);
        // Widen the spacing where a sample stencil would leave the domain.
        for (double sp = spacing;; sp += 0.5 * g.h_) {
            try {
                for (int j = 0; j < 2; ++j) {
                    const double s = b.depth + (j + 1) * sp;
                    std::vector<double> pos(static_cast<std::size_t>(m));
                    for (int a = 0; a < m; ++a) pos[a] = b.foot[a] - s * b.normal[a];
                    b.samples[j] = builder.build(std::move(pos), s, options.curvature_correction);
                }
                break;
            } catch (const ArgumentError&) {
                if (sp >= spacing + 4.0 * g.h_) throw;
            }
        }
        g.band_.push_back(std::move(b));
    }
    return g;
}

}  // namespace mixhess
