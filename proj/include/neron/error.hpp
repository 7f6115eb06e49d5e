#pragma once

#include <stdexcept>
#include <string>

namespace neron {

enum class ErrorKind {
    VarTableMismatch,
    UnknownVariable,
    NonUnit,
    NonSquare,
    OutOfRange,
    ParseError,
    Validation,
    NoSystem,
    NotWellChosen,
    ApproxTooCoarse,
    BoundTooSmall,
    NotArtinian,
    RelationViolated,
    PrecisionInsufficient,
    Internal,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const { return kind_; }

    static const char* kind_name(ErrorKind k) {
        switch (k) {
            case ErrorKind::VarTableMismatch: return "var-table-mismatch";
            case ErrorKind::UnknownVariable: return "unknown-variable";
            case ErrorKind::NonUnit: return "non-unit";
            case ErrorKind::NonSquare: return "non-square";
            case ErrorKind::OutOfRange: return "out-of-range";
            case ErrorKind::ParseError: return "parse-error";
            case ErrorKind::Validation: return "validation";
            case ErrorKind::NoSystem: return "no-system";
            case ErrorKind::NotWellChosen: return "not-well-chosen";
            case ErrorKind::ApproxTooCoarse: return "approx-too-coarse";
            case ErrorKind::BoundTooSmall: return "bound-too-small";
            case ErrorKind::NotArtinian: return "not-artinian";
            case ErrorKind::RelationViolated: return "relation-violated";
            case ErrorKind::PrecisionInsufficient: return "precision-insufficient";
            case ErrorKind::Internal: return "internal";
        }
        return "unknown";
    }

  private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
    throw Error(kind, message);
}

} // namespace neron
