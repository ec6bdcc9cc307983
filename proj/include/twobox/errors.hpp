#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace twobox {

enum class ErrorCode {
    NotHermitian,
    NotSquare,
    NoConvergence,
    NotPositive,
    OwnerMismatch,
    NumericallyDegenerate,
    NotAProjection,
    TheoremViolation,
    UnsupportedNonCentralSearch,
    NoStabilization,
    NotCentralMinimal,
    NotVirtualNormalizer,
    BadDelta,
    BadPrime,
    BadShape,
    ClosureFailure,
    DualAxiomFailure,
    UnknownName,
    NonabelianDual,
    NonabelianEitherSide,
    SearchSpaceTooLarge,
    SyntaxError,
    AxiomFailure,
    VersionMismatch,
    IoError,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries one of the codes above so that
// callers (CLI, bindings, tests) can dispatch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace twobox
