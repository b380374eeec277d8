#pragma once

#include <stdexcept>
#include <string>

namespace viscowave {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "error"; }
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "domain"; }
};

class BranchError : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "branch"; }
};

class InvalidKernelError : public DomainError {
public:
    using DomainError::DomainError;
    const char* kind() const noexcept override { return "invalid_kernel"; }
};

// Quadrature or truncation did not reach the requested tolerance.
// Carries the last estimate and its error bound.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double estimate, double error_bound)
        : Error(what), estimate_(estimate), error_bound_(error_bound) {}
    const char* kind() const noexcept override { return "convergence"; }
    double estimate() const noexcept { return estimate_; }
    double error_bound() const noexcept { return error_bound_; }

private:
    double estimate_;
    double error_bound_;
};

// Finite-difference signal is below the rounding-noise floor; no verdict possible.
class PrecisionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "precision"; }
};

class InconsistencyError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "inconsistency"; }
};

class DegenerateMaterialError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "degenerate_material"; }
};

class ResolutionError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "resolution"; }
};

class FitError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "fit"; }
};

class SchemaError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "schema"; }
};

} // namespace viscowave
