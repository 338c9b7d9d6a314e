#include "textnet/error.hpp"

namespace textnet {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::DuplicateId: return "DuplicateId";
        case ErrorKind::UnknownLabel: return "UnknownLabel";
        case ErrorKind::UnreadablePath: return "UnreadablePath";
        case ErrorKind::MalformedInput: return "MalformedInput";
        case ErrorKind::EmptyDocument: return "EmptyDocument";
        case ErrorKind::TooFewTokens: return "TooFewTokens";
        case ErrorKind::Disconnected: return "Disconnected";
        case ErrorKind::NonConvergence: return "NonConvergence";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::MissingClass: return "MissingClass";
        case ErrorKind::CostGuard: return "CostGuard";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace textnet
