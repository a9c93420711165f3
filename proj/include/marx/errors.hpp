#pragma once

#include <stdexcept>
#include <string>

namespace marx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Operand shapes do not conform.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A matrix that must be symmetric positive definite is not.
class NotPositiveDefinite : public Error {
public:
    using Error::Error;
};

/// Degrees of freedom too small for the requested quantity (density, mean, second moment).
class DegreesOfFreedomError : public Error {
public:
    using Error::Error;
};

/// Posterior scale matrix lost positive definiteness during filtering.
class NumericalBreakdown : public Error {
public:
    using Error::Error;
};

/// Malformed configuration input.
class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace marx
