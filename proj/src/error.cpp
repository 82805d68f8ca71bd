#include "rti/error.hpp"

namespace rti {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::NonInvertible: return "non-invertible element";
        case ErrorKind::DegenerateInput: return "degenerate input";
        case ErrorKind::Arity: return "arity";
        case ErrorKind::Length: return "length";
        case ErrorKind::Range: return "range";
        case ErrorKind::Parse: return "parse";
        case ErrorKind::InsufficientMinutiae: return "insufficient minutiae";
        case ErrorKind::Saturation: return "chaff saturation";
        case ErrorKind::Parameter: return "parameter";
        case ErrorKind::Key: return "key";
        case ErrorKind::Protocol: return "protocol";
        case ErrorKind::State: return "state";
        case ErrorKind::UnidentifiedProxy: return "unidentified proxy";
        case ErrorKind::Integrity: return "integrity";
        case ErrorKind::Validation: return "validation";
        case ErrorKind::Replay: return "replay";
        case ErrorKind::Io: return "i/o";
    }
    return "unknown";
}

}  // namespace rti
