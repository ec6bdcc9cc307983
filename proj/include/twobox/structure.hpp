#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "twobox/linalg.hpp"

namespace twobox {

class TwoBoxStructure;
using StructurePtr = std::shared_ptr<const TwoBoxStructure>;

// Raw tables of a structure. Row (i, j) of product/coproduct is stored at i*n + j
// and holds the coefficient vector of b_i . b_j (resp. b_i * b_j).
struct StructureData {
    std::string name;
    std::vector<std::string> labels;
    double delta = 0;
    std::vector<CVector> product;
    std::vector<CVector> coproduct;
    std::vector<double> trace;
    ComplexMatrix contragredient;  // a' = C a
    ComplexMatrix adjoint;         // a* = A conj(a)
    std::optional<std::size_t> unit_index;
    std::optional<std::size_t> jones_index;

    // Not serialized: bookkeeping left by constructors.
    std::vector<std::size_t> free_factor_dims;     // leaf dimensions of a free product
    std::vector<CVector> canonical_biprojections;  // e.g. id(x)e and e(x)id of a tensor product
};

// A 2-box: coefficients over the basis of a shared, immutable structure.
class Element {
public:
    Element() = default;
    Element(StructurePtr owner, CVector coeffs);

    const StructurePtr& owner() const noexcept { return owner_; }
    const TwoBoxStructure& structure() const { return *owner_; }
    const CVector& coeffs() const noexcept { return coeffs_; }
    std::size_t size() const noexcept { return coeffs_.size(); }
    Complex operator[](std::size_t i) const { return coeffs_[i]; }

    Element& operator+=(const Element& o);
    Element& operator-=(const Element& o);
    Element& operator*=(Complex s);
    friend Element operator+(Element a, const Element& b) { return a += b; }
    friend Element operator-(Element a, const Element& b) { return a -= b; }
    friend Element operator*(Complex s, Element a) { return a *= s; }
    friend Element operator*(Element a, Complex s) { return a *= s; }

private:
    StructurePtr owner_;
    CVector coeffs_;
};

class TwoBoxStructure : public std::enable_shared_from_this<TwoBoxStructure> {
public:
    // Checks shapes, finiteness and delta > 1, derives id and e when their indices
    // are absent, and builds orthonormal coordinates for the Markov form.
    // Axioms are not checked here; see verify_axioms.
    static StructurePtr create(StructureData data);

    const StructureData& data() const noexcept { return data_; }
    const std::string& name() const noexcept { return data_.name; }
    std::size_t dim() const noexcept { return n_; }
    double delta() const noexcept { return data_.delta; }
    const std::vector<std::string>& labels() const noexcept { return data_.labels; }
    const std::vector<double>& trace_vector() const noexcept { return data_.trace; }
    const CVector& product_row(std::size_t i, std::size_t j) const { return data_.product[i * n_ + j]; }
    const CVector& coproduct_row(std::size_t i, std::size_t j) const { return data_.coproduct[i * n_ + j]; }

    Element zero() const;
    Element basis(std::size_t i) const;
    Element unit() const;   // id
    Element jones() const;  // e
    Element element(CVector coeffs) const;

    // Basis position of id / e when they coincide with a basis vector.
    std::optional<std::size_t> unit_index() const noexcept { return unit_index_; }
    std::optional<std::size_t> jones_index() const noexcept { return jones_index_; }

    // G(i, j) = tr(b_i^* b_j).
    const ComplexMatrix& gram() const noexcept { return gram_; }
    bool form_positive_definite() const noexcept { return form_pd_; }
    // R maps coefficients to orthonormal coordinates for <x, y> = tr(y^* x); R_inv is its inverse.
    const ComplexMatrix& to_orthonormal() const noexcept { return r_; }
    const ComplexMatrix& from_orthonormal() const noexcept { return r_inv_; }

    // Coefficient-space matrices of x -> a.x, x -> x.a and x -> a*x.
    ComplexMatrix left_multiplication_matrix(const CVector& a) const;
    ComplexMatrix right_multiplication_matrix(const CVector& a) const;
    ComplexMatrix left_coproduct_matrix(const CVector& a) const;

    CVector multiply(const CVector& a, const CVector& b) const;
    CVector coproduct(const CVector& a, const CVector& b) const;
    CVector contragredient(const CVector& a) const;
    CVector adjoint(const CVector& a) const;
    Complex trace(const CVector& a) const;

private:
    explicit TwoBoxStructure(StructureData data);

    StructureData data_;
    std::size_t n_ = 0;
    CVector unit_;
    CVector jones_;
    std::optional<std::size_t> unit_index_;
    std::optional<std::size_t> jones_index_;
    ComplexMatrix gram_;
    ComplexMatrix r_;
    ComplexMatrix r_inv_;
    bool form_pd_ = false;
};

// Element-level operations. Mixing owners throws OwnerMismatch.
Element multiply(const Element& a, const Element& b);
Element coproduct(const Element& a, const Element& b);
Element contragredient(const Element& a);
Element adjoint(const Element& a);
Complex trace(const Element& a);
Complex inner(const Element& x, const Element& y);  // tr(y^* x)

// ||a - b|| / (1 + max(||a||, ||b||)) on coefficients.
double residual(const Element& a, const Element& b);
bool approx_equal(const Element& a, const Element& b, const Tolerance& tol = {});

// Left multiplication by x in orthonormal coordinates; Hermitian iff x = x^*.
ComplexMatrix regular_operator(const Element& x);
// Left convolution L_x : y -> x*y in orthonormal coordinates (the operator 1 box x).
ComplexMatrix convolution_operator(const Element& x);
// Inverse of regular_operator on its image: the element whose operator is M.
Element element_from_regular(const StructurePtr& s, const ComplexMatrix& m);
// Inverse of convolution_operator on its image, read off as M applied to delta*e.
Element element_from_convolution(const StructurePtr& s, const ComplexMatrix& m);

}  // namespace twobox
