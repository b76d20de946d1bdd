// errors.hpp — failure types; the CLI maps each to a distinct exit code

#pragma once

#include <stdexcept>
#include <string>

namespace nmme {

// Bad configuration or invalid domain input (CLI exit 2).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Iterative or quadrature scheme failed to converge (CLI exit 3).
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& msg) : std::runtime_error(msg) {}
};

// Adaptive quadrature could not reach the requested tolerance.
struct QuadratureError : SolverError {
    QuadratureError(const std::string& msg, double achieved)
        : SolverError(msg + " (achieved error estimate " + std::to_string(achieved) + ")"),
          error_estimate(achieved) {}
    double error_estimate;
};

// |u(t)| fell below the invertibility threshold in the propagator route (CLI exit 4).
struct SingularityError : std::runtime_error {
    SingularityError(const std::string& msg, double when)
        : std::runtime_error(msg + " at t = " + std::to_string(when)), time(when) {}
    double time;
};

// Population reached the top of the truncated Fock basis (CLI exit 5).
struct TruncationError : std::runtime_error {
    TruncationError(const std::string& msg, double when)
        : std::runtime_error(msg + " at t = " + std::to_string(when)), time(when) {}
    double time;
};

}  // namespace nmme
