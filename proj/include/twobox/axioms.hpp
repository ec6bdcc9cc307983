#pragma once

#include <string>
#include <vector>

#include "twobox/structure.hpp"

namespace twobox {

struct AxiomCheck {
    std::string name;
    double residual = 0;  // worst relative residual seen
    bool passed = false;
    std::string detail;   // where the worst residual occurred, if it failed
};

struct AxiomReport {
    std::vector<AxiomCheck> checks;
    bool passed() const;
    const AxiomCheck* find(const std::string& name) const;
    std::vector<std::string> failures() const;
};

// Checks every structural law: associativity and units of both multiplications,
// the trace and delta laws read off from coproducts with id, contragredient and
// adjoint compatibility, positivity of the Markov form, the cyclic trace identity,
// centrality and minimality of e, and Schur positivity.
// `schur_samples` random positive pairs are tested on top of all pairs of
// block-minimal projections.
AxiomReport verify_axioms(const StructurePtr& s, const Tolerance& tol = {}, int schur_samples = 200);

// Worst relative negativity min(0, lambda_min(a*b)) / (1 + ||a*b||) over the sample.
struct SchurReport {
    double worst_residual = 0;
    double min_eigenvalue = 0;
    bool trace_positive = true;
    bool passed = false;
    std::size_t pairs = 0;
};

SchurReport schur_product_check(const StructurePtr& s, int trials, const Tolerance& tol = {},
                                unsigned long long seed = 0x5c4a7);

}  // namespace twobox
