#include "twobox/errors.hpp"

namespace twobox {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotSquare: return "NotSquare";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NotPositive: return "NotPositive";
        case ErrorCode::OwnerMismatch: return "OwnerMismatch";
        case ErrorCode::NumericallyDegenerate: return "NumericallyDegenerate";
        case ErrorCode::NotAProjection: return "NotAProjection";
        case ErrorCode::TheoremViolation: return "TheoremViolation";
        case ErrorCode::UnsupportedNonCentralSearch: return "UnsupportedNonCentralSearch";
        case ErrorCode::NoStabilization: return "NoStabilization";
        case ErrorCode::NotCentralMinimal: return "NotCentralMinimal";
        case ErrorCode::NotVirtualNormalizer: return "NotVirtualNormalizer";
        case ErrorCode::BadDelta: return "BadDelta";
        case ErrorCode::BadPrime: return "BadPrime";
        case ErrorCode::BadShape: return "BadShape";
        case ErrorCode::ClosureFailure: return "ClosureFailure";
        case ErrorCode::DualAxiomFailure: return "DualAxiomFailure";
        case ErrorCode::UnknownName: return "UnknownName";
        case ErrorCode::NonabelianDual: return "NonabelianDual";
        case ErrorCode::NonabelianEitherSide: return "NonabelianEitherSide";
        case ErrorCode::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
        case ErrorCode::SyntaxError: return "SyntaxError";
        case ErrorCode::AxiomFailure: return "AxiomFailure";
        case ErrorCode::VersionMismatch: return "VersionMismatch";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace twobox
