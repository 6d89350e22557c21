#pragma once

#include <stdexcept>
#include <string>

namespace rzero {

// Base of every error raised by the library. The CLI maps these onto exit
// codes: ConfigError -> 2, everything numeric -> 3.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An input parameter lies outside the domain of the model (alpha <= 0, rho <= 1, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

// The caller broke an operation contract (dimension mismatch, mismatched grids, ...).
class ContractError : public Error {
public:
    using Error::Error;
};

// The operation is not defined for this kind of object (closed form requested
// for a space without one, pointwise density of a boundary measure, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

// Quadrature, decomposition or eigensolver failure.
class NumericError : public Error {
public:
    using Error::Error;
};

class DecompositionError : public NumericError {
public:
    DecompositionError(const std::string& what, int pivot)
        : NumericError(what), pivot_(pivot) {}
    int pivot() const noexcept { return pivot_; }

private:
    int pivot_;
};

// Polynomial degree dropped to zero after trimming, so there is nothing to solve.
class NoRootsError : public NumericError {
public:
    using NumericError::NumericError;
};

class InsufficientSampleError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace rzero
