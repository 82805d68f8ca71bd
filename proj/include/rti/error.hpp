#pragma once

#include <stdexcept>
#include <string>

namespace rti {

enum class ErrorKind {
    NonInvertible,
    DegenerateInput,
    Arity,
    Length,
    Range,
    Parse,
    InsufficientMinutiae,
    Saturation,
    Parameter,
    Key,
    Protocol,
    State,
    UnidentifiedProxy,
    Integrity,
    Validation,
    Replay,
    Io,
};

const char* to_string(ErrorKind kind);

/// All library failures are reported through this type; `kind()` lets
/// callers (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace rti
