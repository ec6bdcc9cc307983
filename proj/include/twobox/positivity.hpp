#pragma once

#include <functional>
#include <vector>

#include "twobox/blocks.hpp"
#include "twobox/structure.hpp"

namespace twobox {

struct Biprojection {
    Element element;
    double trace = 0;
};

// support(Q*Q) weaker than Q. When true the derived identities Q*Q = (tr Q/delta) Q,
// Q' = Q and e <= Q are asserted (TheoremViolation). Throws NotAProjection.
bool is_biprojection(const Element& q, const Tolerance& tol = {});

// All biprojections that are sums of block-minimal projections containing e,
// sorted by trace. A nonabelian product algebra throws UnsupportedNonCentralSearch
// unless allow_partial is set, in which case only sums of central projections are tried.
std::vector<Biprojection> enumerate_biprojections(const StructurePtr& s, const Tolerance& tol = {},
                                                  bool allow_partial = false);

struct GeneratedBiprojection {
    Biprojection biprojection;
    std::size_t iterations = 0;
};
// Smallest biprojection P with P y P = y. Throws NoStabilization, TheoremViolation.
GeneratedBiprojection generate_biprojection(const Element& y, const Tolerance& tol = {});
Biprojection generated_biprojection(const Element& y, const Tolerance& tol = {});

// e_2 = L_id / delta.
ComplexMatrix e2_operator(const StructurePtr& s);
// ||L_A||, asserted equal to tr(A)/delta for positive A (TheoremViolation otherwise).
double norm_check(const Element& a, const Tolerance& tol = {});

struct SpectralCheck {
    Biprojection generated;
    double distance = 0;  // Frobenius distance between the two projections
    bool passed = false;
};
// Compares the top spectral projection of L_{A+A'} with L_{(delta/tr P) P}, P = gen(A).
// Throws TheoremViolation when they differ by more than `limit`.
SpectralCheck spectral_biprojection_check(const Element& a, const Tolerance& tol = {}, double limit = 1e-7);

enum class Side { Left, Right, Both };
// tr(P) > 1 and rank(P*Q) = 1 (per side) for every block-minimal Q other than P'.
// Throws NotCentralMinimal.
bool is_virtual_normalizer(const Element& p, Side side = Side::Both, const Tolerance& tol = {});

struct SeparatingResult {
    Biprojection biprojection;
    int construction = 0;  // 1: e + P; 2: support of (id - P')(P'*P)(id - P')
};
// Throws NotVirtualNormalizer, TheoremViolation.
SeparatingResult find_separating_biprojection(const Element& p, const Tolerance& tol = {});

struct FreeSeparation {
    std::size_t inner_dim = 0;  // dim {x : QxQ = x}
    std::size_t outer_dim = 0;  // dim {x : Q*x*Q = (tr Q/delta)^2 x}
    std::size_t joint_dim = 0;
    bool separating = false;
};
FreeSeparation free_separation(const Element& q, const Tolerance& tol = {});
bool is_free_separating(const Element& q, const Tolerance& tol = {});

struct TensorSeparation {
    bool product_is_e = false;
    bool coproduct_is_scalar = false;
    bool coproduct_is_id_over_delta = false;
    bool commutes = false;
    std::size_t generated_dim = 0;
    bool separating = false;
};
TensorSeparation tensor_separation(const Element& a, const Element& b, const Tolerance& tol = {});
bool is_tensor_separating(const Element& a, const Element& b, const Tolerance& tol = {});

// Orthonormal basis (coefficient columns) of a subspace given by a linear map's kernel.
ComplexMatrix kernel_of(const StructurePtr& s, const std::function<CVector(const CVector&)>& map,
                        const Tolerance& tol = {});

}  // namespace twobox
