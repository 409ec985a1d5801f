#pragma once

#include <stdexcept>
#include <string>

namespace confdim {

enum class ErrorKind {
    ParseError,
    NotAContraction,
    TrivialSystem,
    PoleInDomain,
    PoleProximity,
    DomainViolation,
    PoleEntersDomain,
    NoFixedPointInDomain,
    BudgetExceeded,
    InsufficientScales,
    NoRootInBracket,
    PreconditionNotMet,
    NoUsablePairs,
    ExtensionFailed,
    StepSelectionFailed,
    PointsDiverged,
    EmptySet,
};

const char* kind_name(ErrorKind kind) noexcept;

// index carries the offending map index or construction step; -1 when not applicable.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, long index = -1);

    ErrorKind kind() const noexcept { return kind_; }
    long index() const noexcept { return index_; }

private:
    ErrorKind kind_;
    long index_;
};

}  // namespace confdim
