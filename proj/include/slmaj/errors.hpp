#pragma once

#include <stdexcept>
#include <string>

namespace slmaj {

// Invalid argument: out-of-range exponent, nonpositive tolerance, malformed potential.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Potential with zero gamma-norm cannot be rescaled onto the constraint set.
class CannotNormalize : public DomainError {
public:
    using DomainError::DomainError;
};

// The adaptive integrator could not make progress; carries the abscissa reached.
class IntegrationFailure : public std::runtime_error {
public:
    IntegrationFailure(const std::string& what, double x_reached)
        : std::runtime_error(what), x_reached_(x_reached) {}
    double x_reached() const noexcept { return x_reached_; }

private:
    double x_reached_;
};

// Ground eigenvalue at or below the positive floor; the phase scaling by sqrt(lambda)
// degenerates there and the finite-difference oracle has to be used instead.
class OutOfPruferDomain : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace slmaj
