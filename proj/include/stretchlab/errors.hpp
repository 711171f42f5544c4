#pragma once

#include <stdexcept>
#include <string>

namespace stretchlab {

// Bad input: violated precondition or malformed configuration.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Numerical breakdown: non-finite values, leaving the hyperboloid, stiffness.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class LineSearchFailed : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoBracket : public NumericalError {
public:
    NoBracket(const std::string& what, double lo, double hi)
        : NumericalError(what), attainable_lo(lo), attainable_hi(hi) {}
    double attainable_lo;
    double attainable_hi;
};

class InvariantViolation : public ValidationError {
public:
    using ValidationError::ValidationError;
};

}  // namespace stretchlab
