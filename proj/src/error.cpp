#include "etc/error.hpp"

#include <fmt/format.h>

namespace etc {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFinite: return "NonFinite";
        case ErrorCode::NonFiniteDerivative: return "NonFiniteDerivative";
        case ErrorCode::NoSignChange: return "NoSignChange";
        case ErrorCode::SingularLyapunov: return "SingularLyapunov";
        case ErrorCode::Indeterminate: return "Indeterminate";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::RhoViolated: return "RhoViolated";
        case ErrorCode::UnknownModel: return "UnknownModel";
        case ErrorCode::NonPositiveConstant: return "NonPositiveConstant";
        case ErrorCode::PolicyMismatch: return "PolicyMismatch";
        case ErrorCode::NotHurwitz: return "NotHurwitz";
        case ErrorCode::LyapunovResidualTooLarge: return "LyapunovResidualTooLarge";
        case ErrorCode::CertificateDegenerate: return "CertificateDegenerate";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::ZenoSuspect: return "ZenoSuspect";
        case ErrorCode::EmptyLog: return "EmptyLog";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::ValidationError: return "ValidationError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

static std::string decorate(ErrorCode code, const std::string& message, std::size_t line) {
    if (line > 0) {
        return fmt::format("{} (line {}): {}", to_string(code), line, message);
    }
    return fmt::format("{}: {}", to_string(code), message);
}

Error::Error(ErrorCode code, const std::string& message, std::size_t line)
    : std::runtime_error(decorate(code, message, line)), code_(code), line_(line) {}

void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace etc
