#pragma once

#include <stdexcept>
#include <string>

namespace qosc {

/// Precondition or argument-domain violation (bad interval, invalid
/// parameter range, index out of bounds, ...).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// A user-supplied function returned a non-finite value during quadrature.
/// Carries the abscissa at which the evaluation failed.
class EvaluationError : public std::runtime_error {
public:
    EvaluationError(const std::string& what, double where)
        : std::runtime_error(what), abscissa(where) {}

    double abscissa;
};

/// An iterative numerical procedure failed to reach its target accuracy
/// (eigensolver non-convergence, degenerate norm, ...).
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// A checked structural assumption was violated at runtime (for example an
/// eigenvector ordering rule that the implementation verifies rather than
/// trusts).
class ConsistencyError : public std::runtime_error {
public:
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed or invalid run configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qosc
