#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pparabolic {

/// Failure categories raised by the library. The enumerator names double as
/// the machine-readable error names reported by the command-line tool.
enum class ErrorCode {
    InvalidParameter,
    InvalidDescriptor,
    EmptyDomain,
    NotABoundaryPoint,
    SingularPoint,
    SingularSample,
    SampleOutsideDomain,
    ZeroGradient,
    GeometryViolation,
    RadiusTooSmall,
    PreconditionViolated,
    NoAdmissibleTau,
    ResolutionTooCoarse,
    CFLViolation,
    GridMismatch,
    InsufficientDecades,
};

constexpr std::string_view error_name(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::InvalidDescriptor: return "InvalidDescriptor";
    case ErrorCode::EmptyDomain: return "EmptyDomain";
    case ErrorCode::NotABoundaryPoint: return "NotABoundaryPoint";
    case ErrorCode::SingularPoint: return "SingularPoint";
    case ErrorCode::SingularSample: return "SingularSample";
    case ErrorCode::SampleOutsideDomain: return "SampleOutsideDomain";
    case ErrorCode::ZeroGradient: return "ZeroGradient";
    case ErrorCode::GeometryViolation: return "GeometryViolation";
    case ErrorCode::RadiusTooSmall: return "RadiusTooSmall";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::NoAdmissibleTau: return "NoAdmissibleTau";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::CFLViolation: return "CFLViolation";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InsufficientDecades: return "InsufficientDecades";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

/// True for errors caused by invalid user input (as opposed to a computation
/// that ran and failed).
constexpr bool is_validation_error(ErrorCode code) {
    return code == ErrorCode::InvalidParameter || code == ErrorCode::InvalidDescriptor ||
           code == ErrorCode::PreconditionViolated || code == ErrorCode::GeometryViolation ||
           code == ErrorCode::RadiusTooSmall || code == ErrorCode::NotABoundaryPoint;
}

inline void require(bool condition, ErrorCode code, std::string_view what) {
    if (!condition) throw Error(code, std::string(what));
}

} // namespace pparabolic
