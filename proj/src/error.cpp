#include "confdim/error.hpp"

namespace confdim {

const char* kind_name(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::NotAContraction: return "NotAContraction";
        case ErrorKind::TrivialSystem: return "TrivialSystem";
        case ErrorKind::PoleInDomain: return "PoleInDomain";
        case ErrorKind::PoleProximity: return "PoleProximity";
        case ErrorKind::DomainViolation: return "DomainViolation";
        case ErrorKind::PoleEntersDomain: return "PoleEntersDomain";
        case ErrorKind::NoFixedPointInDomain: return "NoFixedPointInDomain";
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::InsufficientScales: return "InsufficientScales";
        case ErrorKind::NoRootInBracket: return "NoRootInBracket";
        case ErrorKind::PreconditionNotMet: return "PreconditionNotMet";
        case ErrorKind::NoUsablePairs: return "NoUsablePairs";
        case ErrorKind::ExtensionFailed: return "ExtensionFailed";
        case ErrorKind::StepSelectionFailed: return "StepSelectionFailed";
        case ErrorKind::PointsDiverged: return "PointsDiverged";
        case ErrorKind::EmptySet: return "EmptySet";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, long index)
    : std::runtime_error(message), kind_(kind), index_(index) {}

}  // namespace confdim
