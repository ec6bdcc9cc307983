#pragma once

#include <map>
#include <string>
#include <vector>

#include "twobox/structure.hpp"

namespace twobox {

struct GroupPresentation {
    std::string name;
    std::vector<std::string> element_names;
    std::vector<std::vector<std::size_t>> multiplication;  // multiplication[g][h] = gh
    std::vector<std::size_t> inverse;
    std::size_t identity = 0;

    std::size_t order() const noexcept { return multiplication.size(); }
    // Exact integer check of the group axioms; throws BadShape.
    void validate() const;

    static GroupPresentation cyclic(std::size_t n);
    static GroupPresentation klein_four();
    static GroupPresentation symmetric3();
};

// Basis {e, id}. Any delta > 1 is accepted; Schur positivity needs delta >= sqrt(2).
StructurePtr make_TL(double delta);
StructurePtr make_group(const GroupPresentation& g);
// Same vector space with the two multiplications exchanged; throws DualAxiomFailure
// if the result does not pass verify_axioms.
StructurePtr fourier_dual(const StructurePtr& s, const Tolerance& tol = {});
// Basis {e, g_1, ..., g_{(p-1)/2}}, delta = sqrt(p). Throws BadPrime.
StructurePtr make_subgroup_2p2(int p);
// Span of {a (x) e_B} and {id_A (x) b} inside the tensor product. Throws ClosureFailure.
StructurePtr free_product(const StructurePtr& a, const StructurePtr& b, const Tolerance& tol = {});
StructurePtr tensor_product(const StructurePtr& a, const StructurePtr& b);

// Named catalog entries, parameterized by `params` (e.g. delta=2). Throws UnknownName.
StructurePtr named(const std::string& name, const std::map<std::string, std::string>& params = {});
// Canonical names with their default parameters, in a fixed order.
std::vector<std::string> catalog_names();

}  // namespace twobox
