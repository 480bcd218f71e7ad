#pragma once

#include <stdexcept>
#include <string>

namespace voicekit {

// Base of every error thrown by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A precondition on an argument was violated.
struct InvalidArgument : Error {
    using Error::Error;
};

// A file or document is syntactically broken.
struct FormatError : Error {
    using Error::Error;
};

// A file is well-formed but uses a variant we do not read (codec, channels, maxval).
struct UnsupportedFormat : Error {
    using Error::Error;
};

// An operation is not legal in the current state (session protocol, report before completion).
struct StateError : Error {
    using Error::Error;
};

struct NotFound : Error {
    using Error::Error;
};

inline void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw InvalidArgument(message);
    }
}

} // namespace voicekit
