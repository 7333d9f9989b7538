#ifndef MGSCHED_COMMON_HPP
#define MGSCHED_COMMON_HPP

#include <stdexcept>
#include <string>

namespace mgsched {

// Error hierarchy; the CLI maps these onto exit codes.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Numerical failure inside a solver (never a silent wrong answer).
struct SolveError : Error {
    using Error::Error;
};

// External-solver bridge failure (bad exit code, unparseable or infeasible output).
struct BridgeError : Error {
    using Error::Error;
};

struct AuditError : Error {
    using Error::Error;
};

} // namespace mgsched

#endif
