#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace ccrb {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape mismatch (non-square input, incompatible operands, index out of range).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Iterative or direct numeric procedure failed to meet its contract.
class NumericError : public Error {
public:
    NumericError(const std::string& what, std::size_t iterations = 0, double error_estimate = 0.0)
        : Error(what), iterations_(iterations), error_estimate_(error_estimate) {}

    std::size_t iterations() const noexcept { return iterations_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    std::size_t iterations_;
    double error_estimate_;
};

/// Drift matrix has an eigenvalue outside the open left half-plane.
class StabilityError : public Error {
public:
    StabilityError(const std::string& what, std::complex<double> eigenvalue)
        : Error(what), eigenvalue_(eigenvalue) {}

    std::complex<double> eigenvalue() const noexcept { return eigenvalue_; }

private:
    std::complex<double> eigenvalue_;
};

/// Network description violates a structural invariant.
class SpecError : public Error {
public:
    using Error::Error;
};

/// Requested Bogoliubov frame does not exist (|G+| >= |G-|).
class FrameError : public Error {
public:
    using Error::Error;
};

/// Operation called outside the class of systems it is defined for.
class ApplicabilityError : public Error {
public:
    using Error::Error;
};

/// Closed-form expression evaluated at a pole.
class SingularityError : public Error {
public:
    using Error::Error;
};

}  // namespace ccrb
