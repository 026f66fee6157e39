#pragma once

#include <stdexcept>

namespace hostqual {

// Exit-code mapping used by the CLI:
//   ConfigError -> 1, DataError -> 2, anything else -> 3.

// Bad usage, bad configuration, missing required settings.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data, I/O failures, contract violations
// caused by caller-supplied values.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A broken internal invariant; always a bug.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace hostqual
