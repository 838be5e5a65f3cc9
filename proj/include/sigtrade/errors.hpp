#pragma once

#include <stdexcept>
#include <string>

namespace sigtrade {

/// Parameters outside the domain of a formula (zero denominators, invalid records).
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Evaluation time outside [0, T] or off the simulation grid.
class DomainError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Non-finite or exploding state during ODE integration.
class IntegrationBlowup : public std::runtime_error {
public:
    IntegrationBlowup(double time, const std::string& what)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Fundamental matrix lost invertibility.
class SingularMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed scenario file or override.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace sigtrade
