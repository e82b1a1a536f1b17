#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tyc {

// Configuration / validation failures (CLI exit code 2).
// Carries the full list of violations so callers can report every
// offending field and bound in one pass.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
    ConfigError(const std::string& msg, std::vector<std::string> issues)
        : std::runtime_error(msg), issues_(std::move(issues)) {}
    const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

// Numerical failures: non-finite values, solver non-convergence,
// missing transitions (CLI exit code 3).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A monitored model invariant was broken mid-run, e.g. a bounds violation
// under the four-species model that guarantees [0, K] (CLI exit code 4).
class InvariantViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace tyc
