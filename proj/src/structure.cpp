#include "twobox/structure.hpp"

#include <cmath>
#include <sstream>

#include "twobox/errors.hpp"

namespace twobox {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void require(bool ok, ErrorCode code, const std::string& msg) {
    if (!ok) throw Error(code, msg);
}

void check_table(const std::vector<CVector>& table, std::size_t n, const char* what) {
    require(table.size() == n * n, ErrorCode::BadShape, std::string(what) + " table must have n*n rows");
    for (const auto& row : table) {
        require(row.size() == n, ErrorCode::BadShape, std::string(what) + " row has wrong length");
        for (const auto& z : row) require(finite(z), ErrorCode::BadShape, std::string(what) + " has non-finite entry");
    }
}

void check_matrix(const ComplexMatrix& m, std::size_t n, const char* what) {
    require(m.rows() == n && m.cols() == n, ErrorCode::BadShape, std::string(what) + " must be n x n");
    for (const auto& z : m.entries()) require(finite(z), ErrorCode::BadShape, std::string(what) + " has non-finite entry");
}

CVector unit_vector(std::size_t n, std::size_t i) {
    CVector v(n);
    v[i] = 1.0;
    return v;
}

// Least-squares two-sided unit of a bilinear table: u with u.b_j = b_j.u = b_j.
CVector solve_unit(const std::vector<CVector>& table, std::size_t n) {
    ComplexMatrix a(2 * n * n, n);
    CVector rhs(2 * n * n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t m = 0; m < n; ++m) {
            const std::size_t left = j * n + m, right = n * n + j * n + m;
            for (std::size_t k = 0; k < n; ++k) {
                a(left, k) = table[k * n + j][m];
                a(right, k) = table[j * n + k][m];
            }
            rhs[left] = rhs[right] = (j == m) ? 1.0 : 0.0;
        }
    return solve_least_squares(a, rhs, Tolerance{});
}

std::optional<std::size_t> basis_position(const CVector& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
        if (relative_difference(v, unit_vector(v.size(), i)) <= 1e-12) return i;
    return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Element

Element::Element(StructurePtr owner, CVector coeffs) : owner_(std::move(owner)), coeffs_(std::move(coeffs)) {
    if (!owner_) throw Error(ErrorCode::OwnerMismatch, "element without a structure");
    if (coeffs_.size() != owner_->dim()) throw Error(ErrorCode::BadShape, "coefficient count does not match dim");
}

static void same_owner(const Element& a, const Element& b) {
    if (!a.owner() || a.owner() != b.owner())
        throw Error(ErrorCode::OwnerMismatch, "elements belong to different structures");
}

Element& Element::operator+=(const Element& o) {
    same_owner(*this, o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
}

Element& Element::operator-=(const Element& o) {
    same_owner(*this, o);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
}

Element& Element::operator*=(Complex s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

// ---------------------------------------------------------------------------
// TwoBoxStructure

StructurePtr TwoBoxStructure::create(StructureData data) {
    return StructurePtr(new TwoBoxStructure(std::move(data)));
}

TwoBoxStructure::TwoBoxStructure(StructureData data) : data_(std::move(data)) {
    n_ = data_.trace.size();
    require(n_ > 0, ErrorCode::BadShape, "structure must have at least one basis element");
    require(std::isfinite(data_.delta) && data_.delta > 1.0, ErrorCode::BadDelta,
            "delta must be a finite number > 1");
    if (data_.labels.empty())
        for (std::size_t i = 0; i < n_; ++i) data_.labels.push_back("b" + std::to_string(i));
    require(data_.labels.size() == n_, ErrorCode::BadShape, "labels length must equal dim");
    for (double t : data_.trace) require(std::isfinite(t), ErrorCode::BadShape, "trace has non-finite entry");
    check_table(data_.product, n_, "product");
    check_table(data_.coproduct, n_, "coproduct");
    check_matrix(data_.contragredient, n_, "contragredient");
    check_matrix(data_.adjoint, n_, "adjoint");

    if (data_.unit_index) {
        require(*data_.unit_index < n_, ErrorCode::BadShape, "unit_index out of range");
        unit_ = unit_vector(n_, *data_.unit_index);
    } else {
        unit_ = solve_unit(data_.product, n_);
    }
    if (data_.jones_index) {
        require(*data_.jones_index < n_, ErrorCode::BadShape, "jones_index out of range");
        jones_ = unit_vector(n_, *data_.jones_index);
    } else {
        jones_ = solve_unit(data_.coproduct, n_);
        for (auto& c : jones_) c /= data_.delta;
    }
    unit_index_ = data_.unit_index ? data_.unit_index : basis_position(unit_);
    jones_index_ = data_.jones_index ? data_.jones_index : basis_position(jones_);

    // Gram matrix of the Markov form: G(i, j) = sum_k A(k, i) tr(b_k . b_j).
    ComplexMatrix tr_prod(n_, n_);
    for (std::size_t k = 0; k < n_; ++k)
        for (std::size_t j = 0; j < n_; ++j) tr_prod(k, j) = trace(product_row(k, j));
    gram_ = ComplexMatrix(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) {
            Complex s = 0;
            for (std::size_t k = 0; k < n_; ++k) s += data_.adjoint(k, i) * tr_prod(k, j);
            gram_(i, j) = s;
        }

    ComplexMatrix sym(n_, n_);
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) sym(i, j) = 0.5 * (gram_(i, j) + std::conj(gram_(j, i)));
    const HermitianEig eig = hermitian_eig(sym, Tolerance{});
    const double top = std::max(std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back()));
    const double floor = 1e-12 * std::max(1.0, top);
    form_pd_ = eig.eigenvalues.front() > floor &&
               hermitian_defect(gram_) <= Tolerance{}.eq_tol * (1.0 + gram_.frobenius_norm());
    r_ = ComplexMatrix(n_, n_);
    r_inv_ = ComplexMatrix(n_, n_);
    for (std::size_t k = 0; k < n_; ++k) {
        const double lam = std::max(std::abs(eig.eigenvalues[k]), floor);
        const double s = std::sqrt(lam);
        for (std::size_t i = 0; i < n_; ++i) {
            r_(k, i) = s * std::conj(eig.eigenvectors(i, k));
            r_inv_(i, k) = eig.eigenvectors(i, k) / s;
        }
    }
}

Element TwoBoxStructure::zero() const { return Element(shared_from_this(), CVector(n_)); }

Element TwoBoxStructure::basis(std::size_t i) const {
    require(i < n_, ErrorCode::BadShape, "basis index out of range");
    return Element(shared_from_this(), unit_vector(n_, i));
}

Element TwoBoxStructure::unit() const { return Element(shared_from_this(), unit_); }
Element TwoBoxStructure::jones() const { return Element(shared_from_this(), jones_); }
Element TwoBoxStructure::element(CVector coeffs) const { return Element(shared_from_this(), std::move(coeffs)); }

CVector TwoBoxStructure::multiply(const CVector& a, const CVector& b) const {
    CVector out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (a[i] == Complex(0)) continue;
        for (std::size_t j = 0; j < n_; ++j) {
            const Complex w = a[i] * b[j];
            if (w == Complex(0)) continue;
            const CVector& row = product_row(i, j);
            for (std::size_t k = 0; k < n_; ++k) out[k] += w * row[k];
        }
    }
    return out;
}

CVector TwoBoxStructure::coproduct(const CVector& a, const CVector& b) const {
    CVector out(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        if (a[i] == Complex(0)) continue;
        for (std::size_t j = 0; j < n_; ++j) {
            const Complex w = a[i] * b[j];
            if (w == Complex(0)) continue;
            const CVector& row = coproduct_row(i, j);
            for (std::size_t k = 0; k < n_; ++k) out[k] += w * row[k];
        }
    }
    return out;
}

CVector TwoBoxStructure::contragredient(const CVector& a) const { return data_.contragredient * std::span<const Complex>(a); }

CVector TwoBoxStructure::adjoint(const CVector& a) const {
    CVector c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) c[i] = std::conj(a[i]);
    return data_.adjoint * std::span<const Complex>(c);
}

Complex TwoBoxStructure::trace(const CVector& a) const {
    Complex s = 0;
    for (std::size_t i = 0; i < n_; ++i) s += data_.trace[i] * a[i];
    return s;
}

ComplexMatrix TwoBoxStructure::left_multiplication_matrix(const CVector& a) const {
    ComplexMatrix m(n_, n_);
    for (std::size_t j = 0; j < n_; ++j) m.set_column(j, multiply(a, unit_vector(n_, j)));
    return m;
}

ComplexMatrix TwoBoxStructure::right_multiplication_matrix(const CVector& a) const {
    ComplexMatrix m(n_, n_);
    for (std::size_t j = 0; j < n_; ++j) m.set_column(j, multiply(unit_vector(n_, j), a));
    return m;
}

ComplexMatrix TwoBoxStructure::left_coproduct_matrix(const CVector& a) const {
    ComplexMatrix m(n_, n_);
    for (std::size_t j = 0; j < n_; ++j) m.set_column(j, coproduct(a, unit_vector(n_, j)));
    return m;
}

// ---------------------------------------------------------------------------
// Free functions

Element multiply(const Element& a, const Element& b) {
    same_owner(a, b);
    return Element(a.owner(), a.structure().multiply(a.coeffs(), b.coeffs()));
}

Element coproduct(const Element& a, const Element& b) {
    same_owner(a, b);
    return Element(a.owner(), a.structure().coproduct(a.coeffs(), b.coeffs()));
}

Element contragredient(const Element& a) { return Element(a.owner(), a.structure().contragredient(a.coeffs())); }
Element adjoint(const Element& a) { return Element(a.owner(), a.structure().adjoint(a.coeffs())); }
Complex trace(const Element& a) { return a.structure().trace(a.coeffs()); }

Complex inner(const Element& x, const Element& y) {
    same_owner(x, y);
    return trace(multiply(adjoint(y), x));
}

double residual(const Element& a, const Element& b) {
    same_owner(a, b);
    return relative_difference(a.coeffs(), b.coeffs());
}

bool approx_equal(const Element& a, const Element& b, const Tolerance& tol) {
    return residual(a, b) <= tol.eq_tol;
}

ComplexMatrix regular_operator(const Element& x) {
    const TwoBoxStructure& s = x.structure();
    return s.to_orthonormal() * s.left_multiplication_matrix(x.coeffs()) * s.from_orthonormal();
}

ComplexMatrix convolution_operator(const Element& x) {
    const TwoBoxStructure& s = x.structure();
    return s.to_orthonormal() * s.left_coproduct_matrix(x.coeffs()) * s.from_orthonormal();
}

Element element_from_regular(const StructurePtr& s, const ComplexMatrix& m) {
    const CVector id = s->to_orthonormal() * std::span<const Complex>(s->unit().coeffs());
    const CVector img = m * std::span<const Complex>(id);
    return s->element(s->from_orthonormal() * std::span<const Complex>(img));
}

Element element_from_convolution(const StructurePtr& s, const ComplexMatrix& m) {
    CVector unit = s->jones().coeffs();
    for (auto& c : unit) c *= s->delta();
    const CVector u = s->to_orthonormal() * std::span<const Complex>(unit);
    const CVector img = m * std::span<const Complex>(u);
    return s->element(s->from_orthonormal() * std::span<const Complex>(img));
}

}  // namespace twobox
