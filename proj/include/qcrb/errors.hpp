#pragma once

#include <stdexcept>
#include <string>

namespace qcrb {

/// Invalid input parameters or configuration. Maps to CLI exit code 2.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Out-of-domain argument to a physics or estimation routine.
class DomainError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Numerical failure: non-convergence, cutoff escalation exhausted. Exit code 3.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A result that contradicts a physical invariant. Exit code 4; always a bug.
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace qcrb
