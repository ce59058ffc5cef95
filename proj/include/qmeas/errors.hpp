#pragma once

#include <stdexcept>
#include <string>

namespace qmeas {

/// Raised when an input violates a documented precondition (non-positive
/// duration, unnormalized initial pair, non-physical density matrix, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The adaptive integrator could not advance; `time()` is where it stopped.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double time)
        : std::runtime_error(what + " (at t = " + std::to_string(time) + ")"), time_(time) {}

    double time() const noexcept { return time_; }

private:
    double time_;
};

/// No passage time was found inside the search window.
class NoRootError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace qmeas
