#pragma once

#include <stdexcept>
#include <string>

namespace hfsmdec {

// Bad arguments, malformed inputs, violated preconditions. CLI exit code 2.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse failure in one of the file formats; carries a location string
// ("line 12" or a JSON field path).
struct ParseError : InputError {
    ParseError(const std::string& where, const std::string& what)
        : InputError(where + ": " + what), location(where) {}
    std::string location;
};

// A quotient whose blocks are not all modules. Callers that probe
// moduleness catch this; the CLI reports it as a validation error.
struct QuotientUndefined : InputError {
    using InputError::InputError;
};

// A broken internal invariant. CLI exit code 3.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace hfsmdec
