#pragma once

// Radially symmetric solutions u = f(s), s = |z|^2, on a ball. With g = f'
// the complex Hessian has eigenvalues ((sg)', g, ..., g), and the equation
// becomes a first-order ODE for g marched from s = 0.

#include "mixhess/disc.hpp"

#include <vector>

namespace mixhess {

/// C_{n-1}^m g^m + C_{n-1}^{m-1} g^{m-1} sg_prime.
double radial_sigma(int m, double g, double sg_prime, int n);

struct RadialProblem {
    int n = 2;
    int k = 2;
    double R = 1.0;
    /// alpha_l(s) as polynomial coefficients in s, l = 0..k-1 (constants are one-term polynomials).
    std::vector<std::vector<double>> alpha;
    double start_fraction = 1e-6;    ///< march starts at s = start_fraction * R^2
    double profile_tol = 1e-10;      ///< step halving stops when the profile moves less than this
    double degeneracy_tol = 1e-12;   ///< abort when the ellipticity coefficient drops to this

    void validate() const;
    double alpha_at(int l, double s) const;
};

/// (sg)' from the equation at (g, s); throws NumericError when the radial
/// ellipticity coefficient is <= degeneracy_tol.
double radial_slope(const RadialProblem& p, double g, double s);

/// Positive root of C_n^k g^k = sum_l alpha_l(0) C_n^l g^l.
double radial_g0(const RadialProblem& p);

class RadialProfile {
public:
    const RadialProblem& problem() const { return problem_; }
    /// Table nodes in s, starting at 0 and ending at R^2.
    const std::vector<double>& s() const { return s_; }
    const std::vector<double>& g() const { return g_; }
    /// F(s) = int_0^s g, so f = f(0) + F.
    const std::vector<double>& F() const { return F_; }
    int steps() const { return steps_; }
    double g0() const { return g_.front(); }
    double g_end() const { return g_.back(); }
    double F_end() const { return F_.back(); }

    /// Cubic Hermite interpolation of (F, g) in s; s in [0, R^2].
    double F_at(double s) const;
    double g_at(double s) const;

private:
    friend RadialProfile march(const RadialProblem&);
    RadialProblem problem_;
    std::vector<double> s_, g_, F_;
    int steps_ = 0;
};

/// RK4 in x = ln s from the Taylor start, doubling the step count until the
/// profile changes by at most profile_tol. Admissibility is asserted at every node.
RadialProfile march(const RadialProblem& p);

struct RadialClosure {
    double eps = 0.0;
    double f0 = 0.0;  ///< f(0); zero for eps = 0 (the solution is fixed up to a constant)
    double c = 0.0;   ///< 2R g(R^2) - phi for eps = 0, otherwise unused (0)
};

/// Boundary closure: D_nu u = 2R g(R^2) on |z| = R.
RadialClosure radial_neumann(const RadialProfile& profile, double eps, double phi);

/// u(t) = f0 + F(|t - center|^2) on every unknown of a ball grid of radius R.
ScalarField lift_to_grid(const RadialProfile& profile, double f0, std::shared_ptr<const Grid> grid);

}  // namespace mixhess
