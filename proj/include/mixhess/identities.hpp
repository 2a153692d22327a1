#pragma once

// Seeded property suites over random spectra: the symmetric-function identities
// and inequalities, and the operator checks (ellipticity, trace bounds, Euler
// identity, ratio bounds, concavity, gradient consistency).

#include <cstdint>
#include <string>
#include <vector>

namespace mixhess {

struct IdentityOptions {
    int n_min = 2;
    int n_max = 6;
    int samples = 10000;          ///< per (n, m) for the symmetric-function suite
    int operator_n_max = 4;
    int operator_samples = 1000;  ///< per (n, k) for the operator suite
    std::uint64_t seed = 1;
    /// Test hook: the suite's sigma evaluations return -sigma_m for m >= 1.
    bool inject_fault = false;

    void validate() const;
};

struct PropertyResult {
    std::string property;
    long samples = 0;
    /// Smallest normalized slack over all samples (tolerance included); >= 0 means the property held.
    double worst_margin = 0.0;
    double tolerance = 0.0;
    std::string worst_case;  ///< human-readable description of the worst sample
    bool ok() const { return worst_margin >= 0.0; }
};

struct IdentityReport {
    std::vector<PropertyResult> results;
    double seconds_symfun = 0.0;
    double seconds_operator = 0.0;
    bool ok() const;
};

IdentityReport run_symfun_suite(const IdentityOptions& options);
IdentityReport run_operator_suite(const IdentityOptions& options);
/// Both suites, symmetric functions first.
IdentityReport run_identities(const IdentityOptions& options);

/// Sum over m-subsets of products, by enumeration.
double sigma_brute_force(int m, const std::vector<double>& lambda);

}  // namespace mixhess
