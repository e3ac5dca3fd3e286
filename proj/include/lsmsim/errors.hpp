#pragma once

#include <stdexcept>
#include <string>

namespace lsmsim {

/// Base class for all lsmsim errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input document (JSON descriptor, scenario, graph text, CSV).
class ParseError : public Error {
public:
    using Error::Error;
};

/// Structurally valid input that violates a model invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Numerically degenerate input (constant regressor, zero total variance,
/// rank-deficient design matrix).
class DegenerateInputError : public Error {
public:
    using Error::Error;
};

}  // namespace lsmsim
