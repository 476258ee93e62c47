#pragma once

#include <stdexcept>
#include <string>

namespace isoprofile {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// An iterative method ran out of budget. Carries its best estimate.
class NonConvergenceError : public Error {
public:
    NonConvergenceError(const std::string& what, double best_estimate)
        : Error(what), best_estimate_(best_estimate) {}

    double best_estimate() const noexcept { return best_estimate_; }

private:
    double best_estimate_;
};

/// Root finder called on an interval without a sign change.
class BracketError : public Error {
public:
    using Error::Error;
};

/// Grid index too close to the boundary for the requested stencil.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// Warp function violates the smoothness or positivity requirements.
class InvalidMetricError : public Error {
public:
    using Error::Error;
};

class PositivityError : public Error {
public:
    using Error::Error;
};

class AlignmentError : public Error {
public:
    using Error::Error;
};

/// Quantity requested at a pole of a polar coordinate system.
class SingularRadiusError : public Error {
public:
    using Error::Error;
};

} // namespace isoprofile
