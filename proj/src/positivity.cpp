#include "twobox/positivity.hpp"

#include <algorithm>
#include <cmath>

#include "twobox/errors.hpp"

namespace twobox {

namespace {

double scalar_gap(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

// Orthonormal (coefficient-space) basis grown by Gram-Schmidt with one re-orthogonalization.
class SpanBuilder {
public:
    explicit SpanBuilder(double tol) : tol_(tol) {}

    bool add(CVector v) {
        const double scale = norm2(v);
        if (scale == 0) return false;
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis_) v = axpy(-dot(q, v), q, v);
        const double r = norm2(v);
        if (r <= tol_ * scale) return false;
        for (auto& c : v) c /= r;
        basis_.push_back(std::move(v));
        return true;
    }

    const std::vector<CVector>& basis() const noexcept { return basis_; }
    std::size_t size() const noexcept { return basis_.size(); }

private:
    double tol_;
    std::vector<CVector> basis_;
};

std::vector<CVector> columns_of(const ComplexMatrix& m) {
    std::vector<CVector> out;
    for (std::size_t c = 0; c < m.cols(); ++c) out.push_back(m.column(c));
    return out;
}

bool collinear(const Element& x, const Element& r, const Tolerance& tol) {
    const Complex denom = dot(r.coeffs(), r.coeffs());
    if (std::abs(denom) == 0) return norm2(x.coeffs()) <= tol.eq_tol;
    const Complex c = dot(r.coeffs(), x.coeffs()) / denom;
    return residual(x, c * r) <= tol.eq_tol;
}

}  // namespace

ComplexMatrix kernel_of(const StructurePtr& s, const std::function<CVector(const CVector&)>& map,
                        const Tolerance& tol) {
    const std::size_t n = s->dim();
    ComplexMatrix m(n, n);
    for (std::size_t k = 0; k < n; ++k) m.set_column(k, map(s->basis(k).coeffs()));
    return null_space(m, tol);
}

bool is_biprojection(const Element& q, const Tolerance& tol) {
    if (!is_projection(q, tol)) throw Error(ErrorCode::NotAProjection, "candidate is not a projection");
    const Element qq = coproduct(q, q);
    if (!precedes(qq, q, tol)) return false;

    const auto& s = q.owner();
    const double t = trace(q).real();
    if (residual(qq, (t / s->delta()) * q) > tol.eq_tol)
        throw Error(ErrorCode::TheoremViolation, "biprojection with Q*Q != (tr Q/delta) Q");
    if (residual(contragredient(q), q) > tol.eq_tol)
        throw Error(ErrorCode::TheoremViolation, "biprojection with Q' != Q");
    if (!precedes(s->jones(), q, tol)) throw Error(ErrorCode::TheoremViolation, "biprojection not above e");
    return true;
}

std::vector<Biprojection> enumerate_biprojections(const StructurePtr& s, const Tolerance& tol, bool allow_partial) {
    const BlockDecomposition blocks = block_decomposition(s, tol);
    std::vector<Element> pieces;
    if (blocks.abelian()) {
        pieces = blocks.all_minimal_projections();
    } else {
        if (!allow_partial)
            throw Error(ErrorCode::UnsupportedNonCentralSearch,
                        "product algebra has a matrix block; only central sums can be searched");
        pieces = blocks.central_idempotents;
    }
    if (pieces.empty() || residual(pieces.front(), s->jones()) > tol.eq_tol)
        throw Error(ErrorCode::TheoremViolation, "e is not a central minimal projection");
    const std::size_t k = pieces.size() - 1;
    if (k > 20) throw Error(ErrorCode::SearchSpaceTooLarge, "too many blocks to enumerate");

    std::vector<Biprojection> out;
    for (std::size_t mask = 0; mask < (std::size_t(1) << k); ++mask) {
        Element q = pieces.front();
        for (std::size_t i = 0; i < k; ++i)
            if (mask & (std::size_t(1) << i)) q += pieces[i + 1];
        if (is_biprojection(q, tol)) out.push_back({q, trace(q).real()});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const Biprojection& a, const Biprojection& b) { return a.trace < b.trace - 1e-9; });
    return out;
}

GeneratedBiprojection generate_biprojection(const Element& y, const Tolerance& tol) {
    const auto& s = y.owner();
    const Element ys = adjoint(y);
    const Element x = s->jones() + multiply(ys, y) + multiply(y, ys);
    Element current = support(x, tol);
    for (std::size_t it = 1; it <= s->dim(); ++it) {
        const Element grown = coproduct(current, x) + current;
        Element next = support(0.5 * (grown + adjoint(grown)), tol);
        if (residual(next, current) <= tol.eq_tol) {
            if (!is_biprojection(next, tol))
                throw Error(ErrorCode::TheoremViolation, "generated support is not a biprojection");
            return {{next, trace(next).real()}, it};
        }
        current = std::move(next);
    }
    throw Error(ErrorCode::NoStabilization, "support iteration did not stabilize within dim steps");
}

Biprojection generated_biprojection(const Element& y, const Tolerance& tol) {
    return generate_biprojection(y, tol).biprojection;
}

ComplexMatrix e2_operator(const StructurePtr& s) {
    ComplexMatrix l = convolution_operator(s->unit());
    l *= 1.0 / s->delta();
    return l;
}

double norm_check(const Element& a, const Tolerance& tol) {
    if (!is_positive(a, tol)) throw Error(ErrorCode::NotPositive, "norm_check needs a positive element");
    const ComplexMatrix l = convolution_operator(a);
    ComplexMatrix g = l.adjoint() * l;
    const double top = hermitian_eig(0.5 * (g + g.adjoint()), tol).eigenvalues.back();
    const double norm = std::sqrt(std::max(0.0, top));
    const double expect = trace(a).real() / a.structure().delta();
    if (scalar_gap(norm, expect) > tol.eq_tol)
        throw Error(ErrorCode::TheoremViolation,
                    "||L_A|| = " + std::to_string(norm) + " but tr(A)/delta = " + std::to_string(expect));
    return norm;
}

SpectralCheck spectral_biprojection_check(const Element& a, const Tolerance& tol, double limit) {
    const auto& s = a.owner();
    SpectralCheck out;
    out.generated = generated_biprojection(a, tol);
    ComplexMatrix h = convolution_operator(a + contragredient(a));
    h = 0.5 * (h + h.adjoint());
    const ComplexMatrix top = spectral_projection_max(h, tol);
    const ComplexMatrix expect =
        convolution_operator((s->delta() / out.generated.trace) * out.generated.element);
    out.distance = (top - expect).frobenius_norm();
    out.passed = out.distance <= limit;
    if (!out.passed)
        throw Error(ErrorCode::TheoremViolation,
                    "top spectral projection differs from the generated biprojection by " +
                        std::to_string(out.distance));
    return out;
}

bool is_virtual_normalizer(const Element& p, Side side, const Tolerance& tol) {
    const auto& s = p.owner();
    const BlockDecomposition blocks = block_decomposition(s, tol);
    bool central_minimal = false;
    for (std::size_t i = 0; i < blocks.block_count(); ++i)
        if (blocks.block_dims[i] == 1 && residual(blocks.central_idempotents[i], p) <= tol.eq_tol)
            central_minimal = true;
    if (!central_minimal) throw Error(ErrorCode::NotCentralMinimal, "not a central minimal projection");

    if (!(trace(p).real() > 1.0 + tol.eq_tol)) return false;
    const Element pp = contragredient(p);
    for (const auto& q : blocks.all_minimal_projections()) {
        if (residual(q, pp) <= tol.eq_tol) continue;
        if (side != Side::Right && rank(coproduct(p, q), blocks, tol) != 1) return false;
        if (side != Side::Left && rank(coproduct(q, p), blocks, tol) != 1) return false;
    }
    return true;
}

SeparatingResult find_separating_biprojection(const Element& p, const Tolerance& tol) {
    const auto& s = p.owner();
    if (s->dim() < 3) throw Error(ErrorCode::NotVirtualNormalizer, "needs dim >= 3");
    if (!is_virtual_normalizer(p, Side::Both, tol))
        throw Error(ErrorCode::NotVirtualNormalizer, "projection is not a virtual normalizer");

    const Element e = s->jones();
    const Element id = s->unit();
    const Element pp = contragredient(p);
    const Element x = coproduct(pp, p);

    SeparatingResult out;
    Element q;
    if (precedes(x, e + pp, tol)) {
        q = e + p;
        out.construction = 1;
    } else {
        const Element c = id - pp;
        const Element y = multiply(multiply(c, x), c);
        q = support(0.5 * (y + adjoint(y)), tol);
        out.construction = 2;
    }
    if (!is_biprojection(q, tol))
        throw Error(ErrorCode::TheoremViolation, "separating candidate is not a biprojection");
    const double t = trace(q).real();
    const double d2 = s->delta() * s->delta();
    if (!(t > 1.0 + tol.eq_tol && t < d2 - tol.eq_tol * d2))
        throw Error(ErrorCode::TheoremViolation, "separating biprojection is trivial");

    for (const auto& r : block_decomposition(s, tol).all_minimal_projections()) {
        if (residual(multiply(multiply(q, r), q), r) <= tol.eq_tol) continue;
        if (!collinear(coproduct(coproduct(q, r), q), r, tol))
            throw Error(ErrorCode::TheoremViolation, "minimal projection is split by neither side");
    }
    out.biprojection = {q, t};
    return out;
}

FreeSeparation free_separation(const Element& q, const Tolerance& tol) {
    const auto& s = q.owner();
    const CVector& qc = q.coeffs();
    const double c = std::pow(trace(q).real() / s->delta(), 2);
    const ComplexMatrix inner = kernel_of(
        s,
        [&](const CVector& x) { return axpy(-1.0, x, s->multiply(s->multiply(qc, x), qc)); },
        tol);
    const ComplexMatrix outer = kernel_of(
        s,
        [&](const CVector& x) { return axpy(-c, x, s->coproduct(s->coproduct(qc, x), qc)); },
        tol);
    FreeSeparation out;
    out.inner_dim = inner.cols();
    out.outer_dim = outer.cols();
    SpanBuilder span(tol.rank_tol);
    for (const auto& v : columns_of(inner)) span.add(v);
    for (const auto& v : columns_of(outer)) span.add(v);
    out.joint_dim = span.size();
    out.separating = out.joint_dim == s->dim();
    return out;
}

bool is_free_separating(const Element& q, const Tolerance& tol) { return free_separation(q, tol).separating; }

TensorSeparation tensor_separation(const Element& a, const Element& b, const Tolerance& tol) {
    const auto& s = a.owner();
    const Element id = s->unit();
    TensorSeparation out;
    out.product_is_e = residual(multiply(a, b), s->jones()) <= tol.eq_tol;
    const Element ab = coproduct(a, b);
    out.coproduct_is_scalar = collinear(ab, id, tol);
    out.coproduct_is_id_over_delta = residual(ab, (1.0 / s->delta()) * id) <= tol.eq_tol;

    const CVector& ac = a.coeffs();
    const CVector& bc = b.coeffs();
    auto corner = [&](const CVector& p) {
        return kernel_of(
            s, [&](const CVector& x) { return axpy(-1.0, x, s->multiply(s->multiply(p, x), p)); }, tol);
    };
    const auto under_a = columns_of(corner(ac));
    const auto under_b = columns_of(corner(bc));
    out.commutes = true;
    for (const auto& x : under_a)
        if (relative_difference(s->coproduct(x, bc), s->coproduct(bc, x)) > tol.eq_tol) out.commutes = false;
    for (const auto& x : under_b)
        if (relative_difference(s->coproduct(ac, x), s->coproduct(x, ac)) > tol.eq_tol) out.commutes = false;

    SpanBuilder span(tol.rank_tol);
    for (const auto& x : under_a) span.add(x);
    for (const auto& x : under_b) span.add(x);
    for (std::size_t grown = 1; grown != 0 && span.size() < s->dim();) {
        const std::vector<CVector> current = span.basis();
        const std::size_t before = span.size();
        for (const auto& u : current)
            for (const auto& v : current) {
                span.add(s->multiply(u, v));
                span.add(s->coproduct(u, v));
            }
        grown = span.size() - before;
    }
    out.generated_dim = span.size();
    out.separating = out.product_is_e && out.coproduct_is_scalar && out.coproduct_is_id_over_delta &&
                     out.commutes && out.generated_dim == s->dim();
    return out;
}

bool is_tensor_separating(const Element& a, const Element& b, const Tolerance& tol) {
    return tensor_separation(a, b, tol).separating;
}

}  // namespace twobox
