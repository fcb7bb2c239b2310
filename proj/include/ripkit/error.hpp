#pragma once

#include <stdexcept>
#include <string>

namespace ripkit {

// Invalid arguments, domain violations, malformed inputs. CLI exit code 2.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Numerical breakdown: singular inputs, iteration caps, failed residual
// certificates. CLI exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class IterationLimitError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace ripkit
