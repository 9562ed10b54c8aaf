#pragma once

#include <stdexcept>
#include <string>

namespace discenv {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or configuration (bad sizes, out-of-range settings).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Input that violates a documented precondition of an operation.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Input that is numerically degenerate, e.g. a boundary sample at zero.
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

/// Sampling too coarse to resolve the requested quantity.
class UndersampledError : public Error {
public:
    using Error::Error;
};

/// Data that should be holomorphic carries spectral mass at negative frequencies.
class NonHolomorphicError : public Error {
public:
    using Error::Error;
};

/// An obstacle evaluation failed or returned a non-finite value.
class EvaluationError : public Error {
public:
    using Error::Error;
};

class UnsupportedDimensionError : public Error {
public:
    using Error::Error;
};

/// Internally inconsistent result that signals bad input upstream.
class InconsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace discenv
