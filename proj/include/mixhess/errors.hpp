#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace mixhess {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Precondition on an argument violated (range, shape, symmetry, ...).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Evaluation left the region where a quantity is defined (e.g. sigma_{k-1} <= 0).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Iterative numerical kernel did not converge or met a degeneracy.
class NumericError : public Error {
public:
    using Error::Error;
};

/// A budget (rejections, memory) was exhausted.
class ResourceError : public Error {
public:
    using Error::Error;
};

/// Raised when a discrete field leaves the admissible cone.
class AdmissibilityError : public Error {
public:
    AdmissibilityError(const std::string& what, long point, std::vector<double> sigmas)
        : Error(what), point_(point), sigmas_(std::move(sigmas)) {}

    long point() const noexcept { return point_; }
    const std::vector<double>& sigmas() const noexcept { return sigmas_; }

private:
    long point_;
    std::vector<double> sigmas_;
};

/// Newton iteration or line search failed.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// An asserted a priori bound does not hold on a computed solution.
class VerificationError : public Error {
public:
    using Error::Error;
};

/// Malformed or incomplete run configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace mixhess
