#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ati {

enum class ErrorCode {
    EmptyTrajectory,
    DepthExceedsLength,
    OutOfRange,
    ShiftTooLarge,
    NonFiniteEntry,
    DimensionMismatch,
    NonFiniteEvaluation,
    StepTooSmall,
    EmptyRepresentation,
    Infeasible,
    AmbiguousContinuation,
    ExcitationDeficient,
    NotConverged,
    ZeroMatrix,
    WindowTooShort,
    InconsistentRepresentation,
    NotRational,
    ParseError,
    InvalidArgument,
};

std::string_view toString(ErrorCode code) noexcept;

/// Exception carrying a machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(toString(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace ati
