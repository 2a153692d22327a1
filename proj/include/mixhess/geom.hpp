#pragma once

// Strictly convex domains (balls, axis-aligned ellipsoids) in R^{2n} and the
// Cartesian grid the discretization lives on.

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace mixhess {

enum class DomainKind { ball, ellipsoid };

struct DomainSpec {
    DomainKind kind = DomainKind::ball;
    int n = 1;                    ///< complex dimension; real dimension is 2n
    std::vector<double> center;   ///< length 2n
    std::vector<double> radii;    ///< ball: {R}; ellipsoid: 2n semi-axes

    static DomainSpec ball(int n, double radius, std::vector<double> center = {});
    static DomainSpec ellipsoid(int n, std::vector<double> radii, std::vector<double> center = {});

    int dim() const { return 2 * n; }
    double semi_axis(int a) const { return kind == DomainKind::ball ? radii[0] : radii[a]; }
    double max_semi_axis() const;
    double min_semi_axis() const;

    /// Lower bound k0 with complex Hessian of the normalized defining function >= k0 I.
    double k0() const;
    /// Minimum principal curvature of the boundary.
    double kappa_min() const;
    double diam() const;

    /// Throws ArgumentError on inconsistent fields.
    void validate() const;
};

std::string to_string(DomainKind kind);

struct DefiningValue {
    double r = 0.0;
    std::vector<double> gradient;  ///< Dr
    std::vector<double> normal;    ///< Dr / |Dr|, zero where Dr vanishes
};

/// Ball: signed distance |t-c| - R (at the center the gradient of the quadratic
/// form, i.e. zero, is returned). Ellipsoid: sum (t_a-c_a)^2/a_a^2 - 1.
DefiningValue defining_function(const DomainSpec& d, std::span<const double> t);

struct BoundaryFoot {
    std::vector<double> point;   ///< closest boundary point x_b
    std::vector<double> normal;  ///< outward unit normal at x_b
    double depth = 0.0;          ///< |t - x_b|, positive inside
};

/// Closest point on the boundary of a point inside the closed domain.
BoundaryFoot project_to_boundary(const DomainSpec& d, std::span<const double> t);

/// True when t lies in the closed domain (quadratic form <= 1 + 1e-12).
bool contains(const DomainSpec& d, std::span<const double> t);

enum class PointClass : std::uint8_t { exterior = 0, interior = 1, band = 2 };

/// A point on the inward normal through a band point, reconstructed from grid
/// values: multilinear weights (non-negative, summing to one) plus an optional
/// second-difference correction whose weights sum to zero.
struct NormalSample {
    double depth = 0.0;  ///< distance from the boundary foot along -normal
    std::vector<double> position;
    std::vector<std::pair<std::int32_t, double>> multilinear;  ///< (unknown, weight)
    std::vector<std::pair<std::int32_t, double>> correction;   ///< (unknown, weight)
};

struct BandPoint {
    std::int32_t unknown = -1;
    std::int64_t point = -1;
    std::vector<double> foot;
    std::vector<double> normal;
    double depth = 0.0;  ///< distance of the grid point itself from the boundary
    std::array<NormalSample, 2> samples;
};

struct GridOptions {
    /// Normal samples sit at depth + j * sample_spacing * h, j = 1, 2; the spacing
    /// grows in steps of h/2 at points where a sample stencil would leave the domain.
    double sample_spacing = 1.0;
    /// Add the second-difference correction (exact reconstruction of quadratics).
    bool curvature_correction = true;
};

class Grid {
public:
    const DomainSpec& domain() const { return domain_; }
    int dim() const { return domain_.dim(); }
    int points_per_axis() const { return N_; }
    double spacing() const { return h_; }
    double half_width() const { return half_width_; }
    const std::vector<double>& lower() const { return lo_; }
    const GridOptions& options() const { return options_; }

    std::int64_t num_points() const { return static_cast<std::int64_t>(klass_.size()); }
    std::int64_t stride(int axis) const { return strides_[static_cast<std::size_t>(axis)]; }
    PointClass classify(std::int64_t point) const { return klass_[static_cast<std::size_t>(point)]; }
    /// Unknown index of a grid point, -1 for exterior points.
    std::int32_t unknown_of(std::int64_t point) const { return unknown_[static_cast<std::size_t>(point)]; }
    std::int64_t point_of(std::int32_t unknown) const { return points_[static_cast<std::size_t>(unknown)]; }
    std::int32_t num_unknowns() const { return static_cast<std::int32_t>(points_.size()); }

    std::vector<int> multi_index(std::int64_t point) const;
    std::vector<double> coords(std::int64_t point) const;
    std::vector<double> unknown_coords(std::int32_t unknown) const { return coords(point_of(unknown)); }

    /// Unknown indices of interior points, in lexicographic order.
    const std::vector<std::int32_t>& interior() const { return interior_; }
    /// Band points, in lexicographic order.
    const std::vector<BandPoint>& band() const { return band_; }
    bool is_interior_unknown(std::int32_t u) const { return classify(point_of(u)) == PointClass::interior; }

    std::int64_t count(PointClass c) const;

private:
    friend Grid build_grid(const DomainSpec&, int, double, const GridOptions&);

    DomainSpec domain_;
    int N_ = 0;
    double h_ = 0.0;
    double half_width_ = 0.0;
    GridOptions options_;
    std::vector<double> lo_;
    std::vector<std::int64_t> strides_;
    std::vector<PointClass> klass_;
    std::vector<std::int32_t> unknown_;
    std::vector<std::int64_t> points_;
    std::vector<std::int32_t> interior_;
    std::vector<BandPoint> band_;
};

/// Cube [center - half_width, center + half_width]^{2n}, N points per axis (N >= 9, odd).
/// Throws ArgumentError when the domain does not fit the box or the grid is too
/// coarse to place the normal samples.
Grid build_grid(const DomainSpec& d, int N, double half_width, const GridOptions& options = {});

}  // namespace mixhess
