#pragma once

#include <stdexcept>
#include <string>

namespace sdring {

// Invalid parameters, malformed config files, out-of-range model sizes.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Eigensolver failure or residuals beyond contract.
struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Complex eigenvalue count is odd: tol_im is misconfigured for this spectrum.
struct PairingAnomaly : SolverError {
    using SolverError::SolverError;
};

// The spreading-exponent equation <exp(-mu f_x)> = 1 has no positive root.
struct NoRootError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All threshold results were sentinels; nothing left to aggregate.
struct EmptyAfterFilter : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace sdring
