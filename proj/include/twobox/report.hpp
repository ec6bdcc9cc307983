#pragma once

#include <string>

#include "twobox/classify.hpp"
#include "twobox/structure.hpp"

namespace twobox {

// Structure summary: dimensions, delta, traces, coproduct table, biprojections,
// virtual normalizers, lambda matrix, new-part certificate and dimension bound.
// Parts that do not apply (e.g. lambda matrix of a nonabelian structure) are
// reported as unavailable with the reason. Output is deterministic.
std::string report_text(const StructurePtr& s, const Tolerance& tol = {});
std::string report_json(const StructurePtr& s, const Tolerance& tol = {});

std::string verdict_text(const ClassificationVerdict& v);
std::string verdict_json(const ClassificationVerdict& v);

}  // namespace twobox
