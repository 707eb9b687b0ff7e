#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fklab {

/// Inputs outside an operation's mathematical domain (wrong variant, alpha
/// outside (0,1), crossing condition violated, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Requested work exceeds a hard memory or size cap.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Not enough observations in a window to support the requested statistic.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver did not converge. Carries the best iterate, if any.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    NumericalFailure(const std::string& what, std::vector<double> best)
        : std::runtime_error(what), best_iterate(std::move(best)) {}

    std::vector<double> best_iterate;
};

/// Malformed or out-of-range configuration.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace fklab
