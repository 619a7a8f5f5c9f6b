#pragma once

#include <stdexcept>

namespace wet {

/// Exact-series size limit exceeded; caller should fall back to quadrature.
struct LimitExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Adaptive quadrature could not reach the requested tolerance within budget.
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Polynomial root extraction failed; candidates must not be dropped silently.
struct RootFindingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Quantity undefined for the given parameters (e.g. single-antenna threshold).
struct DegenerateCase : std::domain_error {
    using std::domain_error::domain_error;
};

/// Invalid experiment configuration (bad field value, missing key, ...).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace wet
