#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace etc {

enum class ErrorCode {
    DimensionMismatch,
    NonFinite,
    NonFiniteDerivative,
    NoSignChange,
    SingularLyapunov,
    Indeterminate,
    NotSymmetric,
    RhoViolated,
    UnknownModel,
    NonPositiveConstant,
    PolicyMismatch,
    NotHurwitz,
    LyapunovResidualTooLarge,
    CertificateDegenerate,
    BudgetExceeded,
    ZenoSuspect,
    EmptyLog,
    InsufficientSamples,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorCode code);

/// Single exception type for the library; `code()` identifies the failure and
/// `line()` is non-zero only for scenario parse diagnostics.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::size_t line = 0);

    ErrorCode code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }

private:
    ErrorCode code_;
    std::size_t line_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace etc
