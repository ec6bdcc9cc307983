#pragma once

#include <optional>
#include <string>
#include <vector>

#include "twobox/positivity.hpp"
#include "twobox/structure.hpp"

namespace twobox {

// Minimal idempotents of the coproduct algebra, each with L_Q a rank-one projection.
struct DualIdempotentBasis {
    std::vector<Element> idempotents;
    std::size_t e2_index = 0;  // the one equal to id/delta
};
// Throws NonabelianDual.
DualIdempotentBasis dual_idempotents(const StructurePtr& s, const Tolerance& tol = {});

// P_i * Q_j = lambda(i, j) Q_j, rows without e and columns without the e_2 direction.
struct LambdaMatrix {
    std::vector<Element> rows;
    std::vector<Element> cols;
    std::vector<std::vector<Complex>> lambda;
    std::vector<double> row_traces;
    double delta = 0;

    // |lambda(i, j)| == tr(P_i)/delta within eq_tol.
    bool saturated(std::size_t i, std::size_t j, const Tolerance& tol = {}) const;
};
// Throws NonabelianEitherSide, TheoremViolation.
LambdaMatrix lambda_matrix(const StructurePtr& s, const Tolerance& tol = {});

std::size_t new_part_dimension(const LambdaMatrix& m, const Tolerance& tol = {});
std::size_t new_part_dimension(const StructurePtr& s, const Tolerance& tol = {});

// e plus every row whose entries all saturate the bound; asserted to be a biprojection.
Element depth2_support(const LambdaMatrix& m, const StructurePtr& s, const Tolerance& tol = {});
Element depth2_support(const StructurePtr& s, const Tolerance& tol = {});

struct DimBoundReport {
    std::size_t dim = 0;
    std::size_t bound = 0;  // dim^2 + (dim - 1)^2
    std::optional<std::size_t> new_part;
    std::optional<std::size_t> estimate;  // dim^2 + new_part
};
DimBoundReport dim_bound_report(const StructurePtr& s, const Tolerance& tol = {});

// Structure-preserving linear bijection S -> T as a coefficient matrix, if one exists.
// Throws SearchSpaceTooLarge, NonabelianEitherSide.
std::optional<ComplexMatrix> find_isomorphism(const StructurePtr& s, const StructurePtr& t,
                                              const Tolerance& tol = {});

// Cut-downs by a biprojection Q: the corner {x : QxQ = x} with unit Q, and the
// coproduct corner {x : Q*x*Q = (tr Q/delta)^2 x} with Jones projection Q.
StructurePtr cut_down_inner(const Element& q, const Tolerance& tol = {});
StructurePtr cut_down_outer(const Element& q, const Tolerance& tol = {});

enum class ClassTag { Depth2, FreeProductSplit, TensorSplit, SubgroupZ2Z7, Unclassified };
std::string to_string(ClassTag tag);
int class_number(ClassTag tag);  // 1..4, or 0 when unclassified

struct FreeWitness {
    std::size_t normalizer = 0;  // index into the block-minimal projections
    double normalizer_trace = 0;
    int construction = 0;        // 0 when found by biprojection search
    Biprojection separator;
    FreeSeparation separation;
};

struct TensorWitness {
    Biprojection a;
    Biprojection b;
};

struct SubgroupWitness {
    double c = 0;
    double reconstructed_delta = 0;
    std::vector<CVector> coproduct_table;  // over (e, P1, P2, P3)
    std::vector<std::size_t> order;        // minimal projection indices used as P1, P2, P3
    std::optional<ComplexMatrix> isomorphism;
};

struct ClassificationVerdict {
    ClassTag tag = ClassTag::Unclassified;
    std::string reason;  // machine-readable when unclassified
    std::optional<std::string> group;
    std::optional<ComplexMatrix> group_isomorphism;
    std::vector<FreeWitness> free_witnesses;
    std::vector<TensorWitness> tensor_witnesses;
    std::optional<SubgroupWitness> subgroup;
    std::optional<std::size_t> new_part;
    std::vector<std::string> log;
};

ClassificationVerdict classify_dim4(const StructurePtr& s, const Tolerance& tol = {});

struct SplitNode {
    std::string kind;  // "free", "depth2", "dim2", "unsplit"
    std::size_t dim = 0;
    double delta = 0;
    std::optional<std::string> identified;  // group name for depth-2 leaves
    double separator_trace = 0;
    std::vector<SplitNode> children;
};

struct NormalizerEntry {
    std::size_t index = 0;
    double trace = 0;
    bool virtual_normalizer = false;
};

struct CommuteReport {
    bool product_abelian = false;
    bool dual_abelian = false;
    bool depth2 = false;
    std::vector<NormalizerEntry> inventory;  // minimal projections outside the depth-2 support
    std::optional<SplitNode> split_tree;
};

CommuteReport check_commute_relation_necessary(const StructurePtr& s, const Tolerance& tol = {});
std::vector<std::size_t> split_leaf_dims(const SplitNode& node);

}  // namespace twobox
