#pragma once

#include <stdexcept>
#include <string>

namespace logrank {

/// Error taxonomy mirrored by the CLI exit codes (see tools/).
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Malformed input text or JSON. Exit code 2.
struct ParseError : Error {
    using Error::Error;
};

/// An operation's stated precondition does not hold. Exit code 3.
struct PreconditionError : Error {
    using Error::Error;
};

/// A desk-scale size cap was exceeded. Exit code 4.
struct CapError : Error {
    using Error::Error;
};

/// An iterative solver gave up before reaching its target gap. Exit code 5.
struct ConvergenceError : Error {
    using Error::Error;
};

/// A constructed object failed verification. Exit code 6.
struct VerificationError : Error {
    using Error::Error;
};

}  // namespace logrank
