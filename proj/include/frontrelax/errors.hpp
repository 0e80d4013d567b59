#pragma once

#include <stdexcept>
#include <string>

namespace frontrelax {

/// Precondition or shape violation in caller-supplied data.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative solver ran out of iterations. Carries the last residual.
class NoConvergenceError : public std::runtime_error {
public:
    NoConvergenceError(const std::string& what, double last_residual, int index = -1)
        : std::runtime_error(what), last_residual_(last_residual), index_(index) {}

    double last_residual() const noexcept { return last_residual_; }
    /// Column or node index where the failure happened, -1 if not applicable.
    int index() const noexcept { return index_; }

private:
    double last_residual_;
    int index_;
};

/// The simple-zero-eigenvalue / spectral-gap hypothesis fails for the discrete operator.
class AssumptionViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class SingularityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Denominator <psi, phi'_sigma> too close to zero.
class DegenerateDenominatorError : public std::runtime_error {
public:
    DegenerateDenominatorError(const std::string& what, int index = -1)
        : std::runtime_error(what), index_(index) {}
    int index() const noexcept { return index_; }

private:
    int index_;
};

class InstabilityError : public std::runtime_error {
public:
    InstabilityError(const std::string& what, double time)
        : std::runtime_error(what), time_(time) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

/// Sample points or times outside the region where the torus truncation is trusted.
class ValidityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& field_path, const std::string& message)
        : std::runtime_error(field_path + ": " + message), field_path_(field_path) {}
    const std::string& field_path() const noexcept { return field_path_; }

private:
    std::string field_path_;
};

class ReportError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace frontrelax
