// errors.hpp — exception types shared by all modules

#pragma once

#include <stdexcept>
#include <string>

namespace dicke {

// Bad argument or inconsistent configuration.
struct InvalidParameterError : std::invalid_argument {
    explicit InvalidParameterError(const std::string& what) : std::invalid_argument(what) {}
};

// A state or density matrix violates its invariants (norm, positivity, ...).
struct InvalidStateError : std::runtime_error {
    explicit InvalidStateError(const std::string& what) : std::runtime_error(what) {}
};

// A state was consumed by an operation that requires a fresh, normalized input.
struct StaleStateError : std::runtime_error {
    explicit StaleStateError(const std::string& what) : std::runtime_error(what) {}
};

// Photon population reached the truncation boundary; results would be unreliable.
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Time integration failed to reach the requested accuracy.
struct IntegrationError : std::runtime_error {
    explicit IntegrationError(const std::string& what) : std::runtime_error(what) {}
};

// An eigensolver or other numerical kernel failed.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace dicke
