#pragma once

// Elementary symmetric functions, Garding cones and the sampling helpers used
// by the inequality suites.

#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace mixhess {

/// Real eigenvalue vector lambda_1..lambda_n of a complex Hessian.
class Spectrum {
public:
    Spectrum() = default;
    /// Throws ArgumentError when empty or any entry is not finite.
    explicit Spectrum(std::vector<double> values);
    Spectrum(std::initializer_list<double> values);

    int size() const noexcept { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    std::span<const double> values() const noexcept { return values_; }

    /// Copy sorted descending, ties broken by original index.
    Spectrum sorted_descending() const;

private:
    std::vector<double> values_;
};

struct ConeCertificate {
    int k = 0;
    std::vector<double> sigmas;  ///< sigma_1..sigma_k
    bool member = false;
};

/// sigma_m(lambda); sigma_0 = 1. Prefix recurrence, O(n m).
double sigma(int m, const Spectrum& lambda);
double sigma(int m, std::span<const double> lambda);

/// All of sigma_0..sigma_n in one pass.
std::vector<double> sigma_all(std::span<const double> lambda);

/// sigma_m with the listed entries set to zero (sigma_m(lambda|i), sigma_m(lambda|ij)).
double sigma_reduced(int m, const Spectrum& lambda, std::initializer_list<int> excluded);
double sigma_reduced(int m, const Spectrum& lambda, std::span<const int> excluded);

/// Strict membership in Gamma_k: every sigma_i > 0, i = 1..k.
ConeCertificate in_cone(int k, const Spectrum& lambda);

/// min_{1<=i<=k} sigma_i(lambda); positive iff lambda is in Gamma_k.
double cone_margin(int k, std::span<const double> lambda);

/// Rejection sampler for Gamma_k: entries N(0,1) + shift, shift defaults to n.
/// Deterministic in seed. Throws ResourceError after 10^6 rejections.
std::vector<Spectrum> sample_cone(int k, int n, std::uint64_t seed, int count);
std::vector<Spectrum> sample_cone(int k, int n, std::uint64_t seed, int count, double shift);

/// Binomial coefficient C_n^m as a double (0 outside 0 <= m <= n).
double binomial(int n, int m);

}  // namespace mixhess
