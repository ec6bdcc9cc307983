#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "twobox/structure.hpp"

namespace twobox {

// Artin-Wedderburn data of the product algebra. Block 0 is always the block of e
// when e is central and minimal; other blocks follow by leading basis index.
struct BlockDecomposition {
    std::vector<Element> central_idempotents;
    std::vector<std::size_t> block_dims;           // block i is d_i x d_i matrices
    std::vector<double> block_traces;              // trace of one minimal projection in block i
    std::vector<std::vector<Element>> minimal_projections;  // d_i orthogonal ones per block

    bool abelian() const;
    std::size_t block_count() const noexcept { return block_dims.size(); }
    // Every block-minimal projection, block by block.
    std::vector<Element> all_minimal_projections() const;
};

// Throws NumericallyDegenerate when the centre cannot be split at tolerance.
BlockDecomposition block_decomposition(const StructurePtr& s, const Tolerance& tol = {});

bool is_self_adjoint(const Element& x, const Tolerance& tol = {});
bool is_projection(const Element& x, const Tolerance& tol = {});
bool is_central(const Element& x, const Tolerance& tol = {});
// Self-adjoint with spectrum >= -rank_tol * max(1, ||x||).
bool is_positive(const Element& x, const Tolerance& tol = {});
double min_eigenvalue(const Element& x, const Tolerance& tol = {});

// Range projection of a positive element. Throws NotPositive.
Element support(const Element& x, const Tolerance& tol = {});
// x weaker than y: s(y) s(x) = s(x).
bool precedes(const Element& x, const Element& y, const Tolerance& tol = {});

// Number of minimal projections in the spectral resolution of a positive X.
std::size_t rank(const Element& x, const BlockDecomposition& blocks, const Tolerance& tol = {});
std::size_t rank(const Element& x, const Tolerance& tol = {});

// Random elements with complex Gaussian coefficients in orthonormal coordinates.
Element random_element(const StructurePtr& s, std::mt19937_64& rng);
Element random_self_adjoint(const StructurePtr& s, std::mt19937_64& rng);
// y^* y for random y, scaled to unit trace norm so magnitudes stay comparable.
Element random_positive(const StructurePtr& s, std::mt19937_64& rng);
// Random unitary exp(iH) of the product algebra.
Element random_unitary(const StructurePtr& s, std::mt19937_64& rng);

}  // namespace twobox
