#pragma once

#include <stdexcept>
#include <string>

namespace gpx {

// Parameter outside the admissible domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// A tail is too light for the exact random-interval asymptotics to apply.
class AdmissibilityError : public DomainError {
public:
    using DomainError::DomainError;
};

// The variational minimizer A0 collapsed to the origin (A0 = 0 case).
class DegenerateA0 : public DomainError {
public:
    using DomainError::DomainError;
};

// Super-critical regime requested without sigma(0) or the power-law origin shape.
class MissingOriginBehavior : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedCase : public DomainError {
public:
    using DomainError::DomainError;
};

class UnsupportedSpec : public DomainError {
public:
    using DomainError::DomainError;
};

class InsufficientPoints : public DomainError {
public:
    using DomainError::DomainError;
};

// Malformed configuration file or option value.
class ConfigError : public DomainError {
public:
    using DomainError::DomainError;
};

// Failures of the numerical machinery itself, as opposed to bad input.
class NumericError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmbeddingError : public NumericError {
public:
    using NumericError::NumericError;
};

class QuadratureError : public NumericError {
public:
    using NumericError::NumericError;
};

}  // namespace gpx
