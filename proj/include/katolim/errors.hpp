#ifndef KATOLIM_ERRORS_HPP
#define KATOLIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace katolim {

// Base for all library errors. InputError maps to CLI exit code 2,
// NumericError to exit code 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : Error {
    using Error::Error;
};

struct NumericError : Error {
    using Error::Error;
};

struct NonHermitianInput : InputError {
    using InputError::InputError;
};

struct NotPositiveSemidefinite : InputError {
    using InputError::InputError;
};

struct NotProjection : InputError {
    using InputError::InputError;
};

struct DimensionMismatch : InputError {
    using InputError::InputError;
};

struct BadOrder : InputError {
    using InputError::InputError;
};

struct BadAlpha : InputError {
    using InputError::InputError;
};

struct BadGrid : InputError {
    using InputError::InputError;
};

struct TooLarge : InputError {
    using InputError::InputError;
};

struct ZeroMap : InputError {
    using InputError::InputError;
};

struct RequiresVanishingAtZero : InputError {
    using InputError::InputError;
};

struct RequiresPositiveDefinite : InputError {
    using InputError::InputError;
};

struct DomainError : InputError {
    using InputError::InputError;
};

struct ConvergenceFailure : NumericError {
    using NumericError::NumericError;
};

struct NoConvergence : NumericError {
    using NumericError::NumericError;
};

struct NonPositiveIterate : NumericError {
    using NumericError::NumericError;
};

struct Overflow : NumericError {
    using NumericError::NumericError;
};

} // namespace katolim

#endif
