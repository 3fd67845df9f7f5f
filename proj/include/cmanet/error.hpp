#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cmanet {

enum class Errc {
    InvalidArgument,
    Overflow,
    SurvivalUnderflow,
    DuplicateId,
    NotRegistered,
    AuthFailure,
    OrderViolation,
    ConfigMissing,
    NotDiscovered,
    Refused,
    HandshakeTimeout,
    ConnectionClosed,
    LinkDown,
    NoUplink,
    EmptyCandidates,
    Reducible,
    DimensionMismatch,
    MissingEntry,
    UnknownAxis,
    Validation,
    Io,
};

std::string_view to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

// Carries every violation found, not just the first one.
class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<std::string> violations);

    const std::vector<std::string>& violations() const noexcept { return violations_; }

private:
    std::vector<std::string> violations_;
};

}  // namespace cmanet
