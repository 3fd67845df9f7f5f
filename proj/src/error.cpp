#include "cmanet/error.hpp"

namespace cmanet {

std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::InvalidArgument: return "InvalidArgument";
        case Errc::Overflow: return "Overflow";
        case Errc::SurvivalUnderflow: return "SurvivalUnderflow";
        case Errc::DuplicateId: return "DuplicateId";
        case Errc::NotRegistered: return "NotRegistered";
        case Errc::AuthFailure: return "AuthFailure";
        case Errc::OrderViolation: return "OrderViolation";
        case Errc::ConfigMissing: return "ConfigMissing";
        case Errc::NotDiscovered: return "NotDiscovered";
        case Errc::Refused: return "Refused";
        case Errc::HandshakeTimeout: return "HandshakeTimeout";
        case Errc::ConnectionClosed: return "ConnectionClosed";
        case Errc::LinkDown: return "LinkDown";
        case Errc::NoUplink: return "NoUplink";
        case Errc::EmptyCandidates: return "EmptyCandidates";
        case Errc::Reducible: return "Reducible";
        case Errc::DimensionMismatch: return "DimensionMismatch";
        case Errc::MissingEntry: return "MissingEntry";
        case Errc::UnknownAxis: return "UnknownAxis";
        case Errc::Validation: return "Validation";
        case Errc::Io: return "Io";
    }
    return "Unknown";
}

namespace {
std::string join_violations(const std::vector<std::string>& v) {
    std::string out = "invalid configuration:";
    for (const auto& s : v) {
        out += "\n  - ";
        out += s;
    }
    return out;
}
}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : Error(Errc::Validation, join_violations(violations)), violations_(std::move(violations)) {}

}  // namespace cmanet
