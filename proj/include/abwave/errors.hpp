#pragma once

#include <stdexcept>
#include <string>

namespace abwave {

/// Bad configuration or invalid arguments (CLI exit code 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Numerical failure: instability, missing retarded time, turning point
/// (CLI exit code 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A declared invariant was violated (CLI exit code 4).
struct InvariantViolation : std::runtime_error {
    explicit InvariantViolation(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace abwave
