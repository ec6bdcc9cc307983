#pragma once

#include <string>
#include <string_view>

#include "twobox/structure.hpp"

namespace twobox {

inline constexpr std::string_view kTbxVersion = "tbx-1";

// JSON text of a structure. Doubles are written in shortest round-trip form.
std::string serialize(const TwoBoxStructure& s);

struct ParseOptions {
    Tolerance tol{};
    bool force = false;  // accept documents that fail verify_axioms
};

// Throws SyntaxError (with line and column where known), VersionMismatch,
// AxiomFailure (listing the failing checks) unless force is set.
StructurePtr parse(std::string_view text, const ParseOptions& opts = {});

// File helpers; IoError on unreadable or unwritable paths.
StructurePtr load_file(const std::string& path, const ParseOptions& opts = {});
void save_file(const std::string& path, const TwoBoxStructure& s);

}  // namespace twobox
