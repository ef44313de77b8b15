#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace esclab {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A state, derivative, or filter quantity became NaN/Inf. Runs abort with a
/// diagnostic instead of clamping, so divergence is never masked.
struct NonFiniteState : Error {
    NonFiniteState(const std::string& what, std::size_t step)
        : Error(what + " (step " + std::to_string(step) + ")"), step_index(step) {}
    std::size_t step_index;
};

/// A configuration value violates an invariant. The message names the
/// offending key or parameter.
struct ConfigError : Error {
    using Error::Error;
};

/// An argument is outside the function's domain (e.g. negative amplitude).
struct DomainError : Error {
    using Error::Error;
};

/// Innovation covariance was not positive; indicates numerical corruption of
/// the filter state (cannot occur with r > 0 and a healthy covariance).
struct SingularInnovation : Error {
    using Error::Error;
};

/// The requested trailing window exceeds the trajectory span.
struct WindowTooLong : Error {
    using Error::Error;
};

/// A metric requiring gradient-estimate columns was asked of a trajectory
/// that does not carry them.
struct MissingColumns : Error {
    using Error::Error;
};

/// The reference point passed as a stationary point is not one.
struct NotStationary : Error {
    using Error::Error;
};

/// Periodic-solution search exhausted its period budget.
struct NoConvergence : Error {
    using Error::Error;
};

}  // namespace esclab
