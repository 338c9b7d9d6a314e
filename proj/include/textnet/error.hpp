#pragma once

#include <stdexcept>
#include <string>

namespace textnet {

enum class ErrorKind {
    DuplicateId,
    UnknownLabel,
    UnreadablePath,
    MalformedInput,
    EmptyDocument,
    TooFewTokens,
    Disconnected,
    NonConvergence,
    InvalidArgument,
    MissingClass,
    CostGuard,
    Io,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (and tests)
// can branch on it without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace textnet
