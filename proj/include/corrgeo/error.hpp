#ifndef CORRGEO_ERROR_HPP
#define CORRGEO_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace corrgeo {

enum class ErrorKind {
    AtomBoundExceeded,
    DimensionBoundExceeded,
    DimensionMismatch,
    EmptyInput,
    EmptySlice,
    IndexOutOfRange,
    InvalidExpression,
    NotInElliptope,
    ValueNotInSet,
    SpinBoundExceeded,
    MarginalNotUniform,
    NotNormalized,
    NotHermitian,
    OverlappingRanges,
    UncoveredEigenvalue,
    BadDistribution,
    InvalidState,
    UnknownFigure,
    ParseError,
};

inline std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::AtomBoundExceeded: return "AtomBoundExceeded";
    case ErrorKind::DimensionBoundExceeded: return "DimensionBoundExceeded";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::EmptyInput: return "EmptyInput";
    case ErrorKind::EmptySlice: return "EmptySlice";
    case ErrorKind::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorKind::InvalidExpression: return "InvalidExpression";
    case ErrorKind::NotInElliptope: return "NotInElliptope";
    case ErrorKind::ValueNotInSet: return "ValueNotInSet";
    case ErrorKind::SpinBoundExceeded: return "SpinBoundExceeded";
    case ErrorKind::MarginalNotUniform: return "MarginalNotUniform";
    case ErrorKind::NotNormalized: return "NotNormalized";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::OverlappingRanges: return "OverlappingRanges";
    case ErrorKind::UncoveredEigenvalue: return "UncoveredEigenvalue";
    case ErrorKind::BadDistribution: return "BadDistribution";
    case ErrorKind::InvalidState: return "InvalidState";
    case ErrorKind::UnknownFigure: return "UnknownFigure";
    case ErrorKind::ParseError: return "ParseError";
    }
    return "Unknown";
}

/// Single exception type for every library failure; `kind()` identifies the
/// contract that was violated.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what)
{
    throw Error(kind, what);
}

} // namespace corrgeo

#endif
