#pragma once

#include <stdexcept>
#include <string>

namespace kg {

/// Violated sign or range constraint on a physical or numerical parameter.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sweep plan is empty or inconsistent.
class PlanError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Journal or output file could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Base for failures raised while advancing a trajectory. Carries the time
/// at which the failing step started.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double t) : std::runtime_error(what), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Implicit stage iteration did not reach its tolerance; the step is too large.
class StageDivergence : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};

/// A stage or state value exceeded the blow-up guard or became non-finite.
class NumericalBlowup : public IntegrationError {
public:
    using IntegrationError::IntegrationError;
};

}  // namespace kg
