#include "twobox/classify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "twobox/axioms.hpp"
#include "twobox/blocks.hpp"
#include "twobox/catalog.hpp"
#include "twobox/errors.hpp"

namespace twobox {

namespace {

double scalar_gap(double a, double b) { return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b))); }

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(12);
    os << x;
    return os.str();
}

ComplexMatrix inverse(const ComplexMatrix& m, const Tolerance& tol) {
    const std::size_t n = m.rows();
    ComplexMatrix inv(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        CVector rhs(n);
        rhs[c] = 1.0;
        inv.set_column(c, solve_least_squares(m, rhs, tol));
    }
    return inv;
}

bool coproduct_commutative(const StructurePtr& s, const Tolerance& tol) {
    for (std::size_t i = 0; i < s->dim(); ++i)
        for (std::size_t j = i + 1; j < s->dim(); ++j)
            if (relative_difference(s->coproduct_row(i, j), s->coproduct_row(j, i)) > tol.eq_tol) return false;
    return true;
}

// Lexicographic comparison of complex vectors with a tolerance.
bool lex_less(const CVector& a, const CVector& b) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i].real() - b[i].real()) > 1e-9) return a[i].real() > b[i].real();
        if (std::abs(a[i].imag() - b[i].imag()) > 1e-9) return a[i].imag() > b[i].imag();
    }
    return false;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dual idempotents and the lambda matrix

DualIdempotentBasis dual_idempotents(const StructurePtr& s, const Tolerance& tol) {
    if (!coproduct_commutative(s, tol)) throw Error(ErrorCode::NonabelianDual, "coproduct is not commutative");
    const std::size_t n = s->dim();

    // Hermitian generators of the convolution algebra: b + b^dag and i(b - b^dag), b^dag = (b^*)'.
    std::vector<ComplexMatrix> gens;
    for (std::size_t i = 0; i < n; ++i) {
        const Element b = s->basis(i);
        const Element bd = contragredient(adjoint(b));
        gens.push_back(convolution_operator(b + bd));
        gens.push_back(convolution_operator(Complex(0, 1) * (b - bd)));
    }
    std::mt19937_64 rng(0xd0a1);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<Element> found;
    for (int attempt = 0; attempt < 8 && found.size() != n; ++attempt) {
        ComplexMatrix h(n, n);
        for (const auto& g : gens) h += g * Complex(coef(rng));
        h = 0.5 * (h + h.adjoint());
        const HermitianEig eig = hermitian_eig(h, tol);
        const double spread = eig.eigenvalues.back() - eig.eigenvalues.front();
        found.clear();
        bool simple = true;
        for (std::size_t k = 0; k < n; ++k) {
            if (k + 1 < n && eig.eigenvalues[k + 1] - eig.eigenvalues[k] <= 1e-6 * (1.0 + spread)) simple = false;
            ComplexMatrix p(n, n);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) p(i, j) = eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
            found.push_back(element_from_convolution(s, p));
        }
        if (!simple) found.clear();
    }
    if (found.size() != n) throw Error(ErrorCode::NumericallyDegenerate, "could not separate dual idempotents");

    const Element e2 = (1.0 / s->delta()) * s->unit();
    std::vector<std::pair<CVector, Element>> keyed;
    for (auto& q : found) {
        CVector key(n);
        const Complex qq = inner(q, q);
        for (std::size_t i = 0; i < n; ++i) key[i] = inner(coproduct(s->basis(i), q), q) / qq;
        keyed.emplace_back(std::move(key), std::move(q));
    }
    std::stable_sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        const bool ae = residual(a.second, e2) <= tol.eq_tol, be = residual(b.second, e2) <= tol.eq_tol;
        if (ae != be) return ae;
        return lex_less(a.first, b.first);
    });
    DualIdempotentBasis out;
    for (auto& [key, q] : keyed) out.idempotents.push_back(std::move(q));
    if (residual(out.idempotents.front(), e2) > tol.eq_tol)
        throw Error(ErrorCode::TheoremViolation, "id/delta is not a minimal dual idempotent");
    out.e2_index = 0;
    return out;
}

bool LambdaMatrix::saturated(std::size_t i, std::size_t j, const Tolerance& tol) const {
    return std::abs(std::abs(lambda[i][j]) - row_traces[i] / delta) <= tol.eq_tol;
}

LambdaMatrix lambda_matrix(const StructurePtr& s, const Tolerance& tol) {
    const BlockDecomposition blocks = block_decomposition(s, tol);
    if (!blocks.abelian()) throw Error(ErrorCode::NonabelianEitherSide, "product algebra is not abelian");
    DualIdempotentBasis dual;
    try {
        dual = dual_idempotents(s, tol);
    } catch (const Error& e) {
        if (e.code() != ErrorCode::NonabelianDual) throw;
        throw Error(ErrorCode::NonabelianEitherSide, "coproduct algebra is not abelian");
    }
    LambdaMatrix m;
    m.delta = s->delta();
    const auto minimal = blocks.all_minimal_projections();
    m.rows.assign(minimal.begin() + 1, minimal.end());
    for (std::size_t j = 0; j < dual.idempotents.size(); ++j)
        if (j != dual.e2_index) m.cols.push_back(dual.idempotents[j]);
    for (const auto& p : m.rows) {
        m.row_traces.push_back(trace(p).real());
        std::vector<Complex> row;
        for (const auto& q : m.cols) {
            const Element pq = coproduct(p, q);
            const Complex lam = inner(pq, q) / inner(q, q);
            if (residual(pq, lam * q) > tol.eq_tol)
                throw Error(ErrorCode::TheoremViolation, "dual idempotent is not an eigenvector of L_P");
            row.push_back(lam);
        }
        m.lambda.push_back(std::move(row));
    }
    return m;
}

std::size_t new_part_dimension(const LambdaMatrix& m, const Tolerance& tol) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < m.rows.size(); ++i)
        for (std::size_t j = 0; j < m.cols.size(); ++j)
            if (!m.saturated(i, j, tol)) ++count;
    return count;
}

std::size_t new_part_dimension(const StructurePtr& s, const Tolerance& tol) {
    return new_part_dimension(lambda_matrix(s, tol), tol);
}

Element depth2_support(const LambdaMatrix& m, const StructurePtr& s, const Tolerance& tol) {
    Element sum = s->jones();
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
        bool all = true;
        for (std::size_t j = 0; j < m.cols.size(); ++j) all = all && m.saturated(i, j, tol);
        if (all) sum += m.rows[i];
    }
    if (!is_biprojection(sum, tol)) throw Error(ErrorCode::TheoremViolation, "depth-2 support is not a biprojection");
    return sum;
}

Element depth2_support(const StructurePtr& s, const Tolerance& tol) {
    return depth2_support(lambda_matrix(s, tol), s, tol);
}

DimBoundReport dim_bound_report(const StructurePtr& s, const Tolerance& tol) {
    DimBoundReport r;
    r.dim = s->dim();
    r.bound = r.dim * r.dim + (r.dim - 1) * (r.dim - 1);
    try {
        r.new_part = new_part_dimension(s, tol);
        r.estimate = r.dim * r.dim + *r.new_part;
    } catch (const Error&) {
        // Not computable outside the abelian/abelian case.
    }
    return r;
}

// ---------------------------------------------------------------------------
// Isomorphism search

namespace {

bool verify_map(const StructurePtr& s, const StructurePtr& t, const ComplexMatrix& phi, const Tolerance& tol) {
    const std::size_t n = s->dim();
    if (scalar_gap(s->delta(), t->delta()) > tol.eq_tol) return false;
    auto map = [&](const CVector& v) { return phi * std::span<const Complex>(v); };
    std::vector<CVector> img(n);
    for (std::size_t i = 0; i < n; ++i) img[i] = phi.column(i);
    for (std::size_t i = 0; i < n; ++i) {
        const CVector bi = s->basis(i).coeffs();
        if (scalar_gap(0, std::abs(t->trace(img[i]) - s->trace(bi))) > tol.eq_tol) return false;
        if (relative_difference(map(s->contragredient(bi)), t->contragredient(img[i])) > tol.eq_tol) return false;
        if (relative_difference(map(s->adjoint(bi)), t->adjoint(img[i])) > tol.eq_tol) return false;
        for (std::size_t j = 0; j < n; ++j) {
            if (relative_difference(map(s->product_row(i, j)), t->multiply(img[i], img[j])) > tol.eq_tol) return false;
            if (relative_difference(map(s->coproduct_row(i, j)), t->coproduct(img[i], img[j])) > tol.eq_tol)
                return false;
        }
    }
    return true;
}

struct MinimalTables {
    std::vector<Element> p;
    ComplexMatrix basis;
    ComplexMatrix inv;
    std::vector<double> traces;
    std::vector<std::vector<CVector>> coprod;  // coordinates of P_i * P_j in the P basis
    std::vector<std::size_t> contra;
    bool ok = true;
};

MinimalTables minimal_tables(const StructurePtr& s, const Tolerance& tol) {
    MinimalTables m;
    m.p = block_decomposition(s, tol).all_minimal_projections();
    const std::size_t n = m.p.size();
    std::vector<CVector> cols;
    for (const auto& x : m.p) cols.push_back(x.coeffs());
    m.basis = ComplexMatrix::from_columns(cols, s->dim());
    m.inv = inverse(m.basis, tol);
    auto coords = [&](const Element& x) { return m.inv * std::span<const Complex>(x.coeffs()); };
    m.coprod.assign(n, std::vector<CVector>(n));
    for (std::size_t i = 0; i < n; ++i) {
        m.traces.push_back(trace(m.p[i]).real());
        for (std::size_t j = 0; j < n; ++j) m.coprod[i][j] = coords(coproduct(m.p[i], m.p[j]));
        const CVector c = coords(contragredient(m.p[i]));
        std::size_t hit = n;
        for (std::size_t k = 0; k < n; ++k)
            if (std::abs(c[k] - Complex(1.0)) <= 1e-8) hit = k;
        if (hit == n) m.ok = false;
        m.contra.push_back(hit);
    }
    return m;
}

bool close(Complex a, Complex b, const Tolerance& tol) { return std::abs(a - b) <= tol.eq_tol * (1.0 + std::abs(a)); }

std::optional<ComplexMatrix> abelian_isomorphism(const StructurePtr& s, const StructurePtr& t, const Tolerance& tol) {
    const MinimalTables ms = minimal_tables(s, tol);
    const MinimalTables mt = minimal_tables(t, tol);
    const std::size_t n = ms.p.size();
    if (!ms.ok || !mt.ok || mt.p.size() != n) return std::nullopt;

    // Candidate count: product of factorials of trace-class sizes (e is pinned).
    {
        std::vector<double> tr(ms.traces.begin() + 1, ms.traces.end());
        std::sort(tr.begin(), tr.end());
        double count = 1;
        for (std::size_t i = 0; i < tr.size();) {
            std::size_t j = i;
            while (j < tr.size() && scalar_gap(tr[i], tr[j]) <= tol.eq_tol) ++j;
            for (std::size_t k = 2; k <= j - i; ++k) count *= double(k);
            i = j;
        }
        if (count > 1e6) throw Error(ErrorCode::SearchSpaceTooLarge, "more than 1e6 candidate bijections");
    }

    std::vector<std::size_t> sigma(n, n);
    std::vector<bool> used(n, false);
    std::optional<ComplexMatrix> result;

    auto consistent = [&](std::size_t i) {
        const std::size_t ci = ms.contra[i];
        if (ci <= i && sigma[ci] != mt.contra[sigma[i]]) return false;
        for (std::size_t j = 0; j <= i; ++j)
            for (std::size_t k = 0; k <= i; ++k) {
                if (j != i && k != i) continue;
                for (std::size_t l = 0; l <= i; ++l)
                    if (!close(ms.coprod[j][k][l], mt.coprod[sigma[j]][sigma[k]][sigma[l]], tol)) return false;
                // Coefficients on already-assigned targets that nothing maps to yet must vanish later;
                // the full verification catches them.
            }
        for (std::size_t l = 0; l < i; ++l)
            for (std::size_t j = 0; j < i; ++j)
                if (!close(ms.coprod[j][l][i], mt.coprod[sigma[j]][sigma[l]][sigma[i]], tol)) return false;
        return true;
    };

    std::function<bool(std::size_t)> search = [&](std::size_t i) -> bool {
        if (i == n) {
            ComplexMatrix target(t->dim(), n);
            for (std::size_t k = 0; k < n; ++k) target.set_column(k, mt.basis.column(sigma[k]));
            ComplexMatrix phi = target * ms.inv;
            if (!verify_map(s, t, phi, tol)) return false;
            result = std::move(phi);
            return true;
        }
        for (std::size_t c = 0; c < n; ++c) {
            if (used[c] || scalar_gap(ms.traces[i], mt.traces[c]) > tol.eq_tol) continue;
            if ((i == 0) != (c == 0)) continue;  // e goes to e
            sigma[i] = c;
            used[c] = true;
            if (consistent(i) && search(i + 1)) return true;
            used[c] = false;
            sigma[i] = n;
        }
        return false;
    };
    search(0);
    return result;
}

}  // namespace

std::optional<ComplexMatrix> find_isomorphism(const StructurePtr& s, const StructurePtr& t, const Tolerance& tol) {
    if (s->dim() != t->dim() || scalar_gap(s->delta(), t->delta()) > tol.eq_tol) return std::nullopt;
    const bool s_ab = block_decomposition(s, tol).abelian();
    const bool t_ab = block_decomposition(t, tol).abelian();
    if (s_ab && t_ab) return abelian_isomorphism(s, t, tol);
    if (s_ab != t_ab) return std::nullopt;
    const bool s_dual = coproduct_commutative(s, tol), t_dual = coproduct_commutative(t, tol);
    if (!s_dual || !t_dual) {
        if (s_dual != t_dual) return std::nullopt;
        throw Error(ErrorCode::NonabelianEitherSide, "neither multiplication is commutative");
    }
    auto phi = abelian_isomorphism(fourier_dual(s, tol), fourier_dual(t, tol), tol);
    if (phi && !verify_map(s, t, *phi, tol)) return std::nullopt;
    return phi;
}

// ---------------------------------------------------------------------------
// Cut-downs

namespace {

// Reduced column echelon form: a canonical basis of the column span.
std::vector<CVector> canonical_basis(const ComplexMatrix& k) {
    const std::size_t n = k.rows(), m = k.cols();
    std::vector<CVector> rows(m, CVector(n));
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t r = 0; r < n; ++r) rows[c][r] = k(r, c);
    std::size_t lead = 0;
    for (std::size_t col = 0; col < n && lead < m; ++col) {
        std::size_t best = lead;
        for (std::size_t r = lead; r < m; ++r)
            if (std::abs(rows[r][col]) > std::abs(rows[best][col])) best = r;
        if (std::abs(rows[best][col]) < 1e-9) continue;
        std::swap(rows[lead], rows[best]);
        const Complex piv = rows[lead][col];
        for (auto& x : rows[lead]) x /= piv;
        for (std::size_t r = 0; r < m; ++r) {
            if (r == lead) continue;
            const Complex f = rows[r][col];
            for (std::size_t c = 0; c < n; ++c) rows[r][c] -= f * rows[lead][c];
        }
        ++lead;
    }
    for (auto& row : rows)
        for (auto& x : row) {
            if (std::abs(x.real()) < 1e-14) x.real(0.0);
            if (std::abs(x.imag()) < 1e-14) x.imag(0.0);
        }
    return rows;
}

StructurePtr restricted(const StructurePtr& s, const std::vector<CVector>& basis, std::string name, double delta,
                        double coproduct_scale, double trace_scale, const Tolerance& tol) {
    const std::size_t n = basis.size();
    const ComplexMatrix embed = ComplexMatrix::from_columns(basis, s->dim());
    auto restrict = [&](const CVector& v) {
        CVector x = solve_least_squares(embed, v, tol);
        if (relative_difference(embed * std::span<const Complex>(x), v) > tol.eq_tol)
            throw Error(ErrorCode::ClosureFailure, "cut-down is not closed");
        return x;
    };
    StructureData d;
    d.name = std::move(name);
    d.delta = delta;
    d.product.resize(n * n);
    d.coproduct.resize(n * n);
    d.contragredient = ComplexMatrix(n, n);
    d.adjoint = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lead = 0;
        while (lead < basis[i].size() && std::abs(basis[i][lead]) < 1e-9) ++lead;
        d.labels.push_back("[" + (lead < s->dim() ? s->labels()[lead] : std::to_string(i)) + "]");
        d.trace.push_back(trace_scale * s->trace(basis[i]).real());
        d.contragredient.set_column(i, restrict(s->contragredient(basis[i])));
        CVector c(basis[i].size());
        for (std::size_t k = 0; k < c.size(); ++k) c[k] = std::conj(basis[i][k]);
        d.adjoint.set_column(i, restrict(s->data().adjoint * std::span<const Complex>(c)));
        for (std::size_t j = 0; j < n; ++j) {
            d.product[i * n + j] = restrict(s->multiply(basis[i], basis[j]));
            CVector cp = s->coproduct(basis[i], basis[j]);
            for (auto& x : cp) x *= coproduct_scale;
            d.coproduct[i * n + j] = restrict(cp);
        }
    }
    return TwoBoxStructure::create(std::move(d));
}

}  // namespace

StructurePtr cut_down_inner(const Element& q, const Tolerance& tol) {
    const auto& s = q.owner();
    const CVector& qc = q.coeffs();
    const ComplexMatrix k = kernel_of(
        s, [&](const CVector& x) { return axpy(-1.0, x, s->multiply(s->multiply(qc, x), qc)); }, tol);
    const double tq = trace(q).real();
    return restricted(s, canonical_basis(k), s->name() + "_inner", std::sqrt(tq), s->delta() / std::sqrt(tq), 1.0, tol);
}

StructurePtr cut_down_outer(const Element& q, const Tolerance& tol) {
    const auto& s = q.owner();
    const CVector& qc = q.coeffs();
    const double tq = trace(q).real();
    const double c = std::pow(tq / s->delta(), 2);
    const ComplexMatrix k = kernel_of(
        s, [&](const CVector& x) { return axpy(-c, x, s->coproduct(s->coproduct(qc, x), qc)); }, tol);
    return restricted(s, canonical_basis(k), s->name() + "_outer", s->delta() / std::sqrt(tq), 1.0 / std::sqrt(tq),
                      1.0 / tq, tol);
}

// ---------------------------------------------------------------------------
// Classification

std::string to_string(ClassTag tag) {
    switch (tag) {
        case ClassTag::Depth2: return "Depth2";
        case ClassTag::FreeProductSplit: return "FreeProductSplit";
        case ClassTag::TensorSplit: return "TensorSplit";
        case ClassTag::SubgroupZ2Z7: return "SubgroupZ2Z7";
        case ClassTag::Unclassified: return "Unclassified";
    }
    return "Unclassified";
}

int class_number(ClassTag tag) {
    switch (tag) {
        case ClassTag::Depth2: return 1;
        case ClassTag::FreeProductSplit: return 2;
        case ClassTag::TensorSplit: return 3;
        case ClassTag::SubgroupZ2Z7: return 4;
        case ClassTag::Unclassified: return 0;
    }
    return 0;
}

namespace {

bool nontrivial(const Biprojection& b, const StructurePtr& s, const Tolerance& tol) {
    const double d2 = s->delta() * s->delta();
    return b.trace > 1.0 + tol.eq_tol && b.trace < d2 * (1.0 - tol.eq_tol);
}

// Minimal projections other than e, by descending trace then index.
std::vector<std::size_t> normalizer_order(const std::vector<Element>& minimal) {
    std::vector<std::size_t> idx(minimal.size() - 1);
    std::iota(idx.begin(), idx.end(), 1);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const double ta = trace(minimal[a]).real(), tb = trace(minimal[b]).real();
        if (std::abs(ta - tb) > 1e-9 * (1.0 + std::abs(ta))) return ta > tb;
        return a < b;
    });
    return idx;
}

StructurePtr reconstruct_case_d(double c) {
    const std::size_t n = 4;
    const double delta = std::sqrt(1.0 + 3.0 * c);
    StructureData d;
    d.name = "reconstructed(c=" + fmt(c) + ")";
    d.delta = delta;
    d.labels = {"e", "P1", "P2", "P3"};
    d.trace = {1.0, c, c, c};
    d.product.assign(n * n, CVector(n));
    d.coproduct.assign(n * n, CVector(n));
    for (std::size_t i = 0; i < n; ++i) d.product[i * n + i][i] = 1.0;
    auto set = [&](std::size_t i, std::size_t j, CVector v) {
        d.coproduct[i * n + j] = v;
        d.coproduct[j * n + i] = v;
    };
    const double a = c / delta, b = (c - 1.0) / delta, u = 1.0 / delta;
    for (std::size_t i = 0; i < n; ++i) {
        CVector v(n);
        v[i] = u;
        set(0, i, v);
    }
    set(1, 1, {a, 0, b, 0});
    set(1, 2, {0, b, 0, u});
    set(1, 3, {0, 0, u, b});
    set(2, 2, {a, 0, 0, b});
    set(2, 3, {0, u, b, 0});
    set(3, 3, {a, b, 0, 0});
    d.contragredient = ComplexMatrix::identity(n);
    d.adjoint = ComplexMatrix::identity(n);
    d.unit_index = std::nullopt;
    d.jones_index = 0;
    return TwoBoxStructure::create(std::move(d));
}

// The case where S_3/I_3 is a full 3x3 block: every coproduct coefficient is
// pinned down by the trace c of the three non-trivial minimal projections.
std::optional<SubgroupWitness> analyse_full_block(const StructurePtr& s, const std::vector<Element>& p,
                                                   const Tolerance& tol, std::vector<std::string>& log,
                                                   std::string& reason) {
    const double delta = s->delta();
    std::vector<CVector> cols;
    for (const auto& x : p) cols.push_back(x.coeffs());
    const ComplexMatrix inv = inverse(ComplexMatrix::from_columns(cols, s->dim()), tol);
    auto coords = [&](const Element& x) { return inv * std::span<const Complex>(x.coeffs()); };

    const double c = trace(p[1]).real();
    for (std::size_t i = 2; i < 4; ++i)
        if (scalar_gap(trace(p[i]).real(), c) > tol.eq_tol) {
            reason = "case_d_unequal_traces";
            log.push_back("case (d): minimal projections have different traces");
            return std::nullopt;
        }
    log.push_back("case (d): common trace c = " + fmt(c));

    std::size_t i1 = 4;
    for (std::size_t i = 1; i < 4 && i1 == 4; ++i)
        if (residual(contragredient(p[i]), p[i]) <= tol.eq_tol) i1 = i;
    if (i1 == 4) {
        reason = "case_d_no_self_contragredient";
        log.push_back("case (d): no self-contragredient minimal projection");
        return std::nullopt;
    }
    const CVector sq = coords(coproduct(p[i1], p[i1]));
    std::size_t i2 = 4;
    for (std::size_t k = 1; k < 4; ++k)
        if (k != i1 && (i2 == 4 || std::abs(sq[k]) > std::abs(sq[i2]))) i2 = k;
    const std::size_t i3 = 6 - i1 - i2;
    if (!close(sq[0], c / delta, tol) || !close(sq[i2], (c - 1.0) / delta, tol) || std::abs(sq[i1]) > tol.eq_tol ||
        std::abs(sq[i3]) > tol.eq_tol) {
        reason = "case_d_bookkeeping";
        log.push_back("case (d): P1*P1 is not (c/delta) e + ((c-1)/delta) P_k");
        return std::nullopt;
    }

    // Associativity comparison of the P3 coefficient: (c-1)/delta^2 against (c-1)^2/delta^2.
    const Element& P1 = p[i1];
    const Element& P2 = p[i2];
    const Complex lhs = coords(coproduct(P1, coproduct(P1, P2)))[i3];
    const Complex rhs = coords(coproduct(coproduct(P1, P1), P2))[i3];
    log.push_back("case (d): P3 coefficient of P1*(P1*P2) = " + fmt(lhs.real()) + ", of (P1*P1)*P2 = " +
                  fmt(rhs.real()));
    auto gap = [](double x) { return (x - 1.0) - (x - 1.0) * (x - 1.0); };  // times 1/delta^2
    // Roots of (c-1) = (c-1)^2 are 1 and 2; c = 1 would remove P_k from P1*P1.
    const double derived = 2.0;
    if (!close(lhs, (c - 1.0) / (delta * delta), tol) || !close(rhs, (c - 1.0) * (c - 1.0) / (delta * delta), tol) ||
        std::abs(gap(c)) / (delta * delta) > tol.eq_tol || std::abs(c - derived) > tol.eq_tol) {
        reason = "case_d_c_mismatch";
        log.push_back("case (d): associativity forces c = 2, input has c = " + fmt(c));
        return std::nullopt;
    }

    SubgroupWitness w;
    w.c = c;
    w.order = {i1, i2, i3};
    const StructurePtr rec = reconstruct_case_d(derived);
    w.reconstructed_delta = rec->delta();
    w.coproduct_table = rec->data().coproduct;

    // The input table must agree with the reconstruction in the (e, P1, P2, P3) basis.
    const std::vector<std::size_t> map = {0, i1, i2, i3};
    double worst = 0;
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b) {
            const CVector got = coords(coproduct(p[map[a]], p[map[b]]));
            CVector reordered(4);
            for (std::size_t k = 0; k < 4; ++k) reordered[k] = got[map[k]];
            worst = std::max(worst, relative_difference(reordered, rec->coproduct_row(a, b)));
        }
    log.push_back("case (d): table residual against reconstruction " + fmt(worst));
    if (worst > tol.eq_tol) {
        reason = "case_d_table_mismatch";
        return std::nullopt;
    }
    const StructurePtr catalog = make_subgroup_2p2(7);
    if (!find_isomorphism(rec, catalog, tol)) {
        reason = "case_d_reconstruction_not_isomorphic";
        return std::nullopt;
    }
    w.isomorphism = find_isomorphism(s, catalog, tol);
    if (!w.isomorphism) {
        reason = "case_d_input_not_isomorphic";
        return std::nullopt;
    }
    log.push_back("case (d): isomorphic to Z2subZ7");
    return w;
}

}  // namespace

ClassificationVerdict classify_dim4(const StructurePtr& s, const Tolerance& tol) {
    ClassificationVerdict v;
    auto refuse = [&](const std::string& reason, const std::string& msg) {
        v.tag = ClassTag::Unclassified;
        v.reason = reason;
        v.log.push_back(msg);
        return v;
    };
    if (s->dim() != 4) return refuse("dim_not_4", "dim S2 = " + std::to_string(s->dim()));
    const AxiomReport axioms = verify_axioms(s, tol);
    if (!axioms.passed()) {
        std::string failed;
        for (const auto& f : axioms.failures()) failed += " " + f;
        return refuse("axioms_failed", "axioms failed:" + failed);
    }
    BlockDecomposition blocks;
    try {
        blocks = block_decomposition(s, tol);
    } catch (const Error& e) {
        return refuse("block_decomposition_failed", e.what());
    }
    if (!blocks.abelian()) return refuse("nonabelian_product", "product algebra has a matrix block");
    if (!coproduct_commutative(s, tol)) return refuse("nonabelian_dual", "coproduct is not commutative");

    const LambdaMatrix lm = lambda_matrix(s, tol);
    const std::size_t npd = new_part_dimension(lm, tol);
    v.new_part = npd;
    v.log.push_back("new_part_dimension = " + std::to_string(npd));
    const Element d2 = depth2_support(lm, s, tol);
    const auto minimal = blocks.all_minimal_projections();

    // (i) depth 2
    if (residual(d2, s->unit()) <= tol.eq_tol) {
        v.log.push_back("depth-2 support is id");
        for (const auto& [name, g] : {std::pair{std::string("Z4"), GroupPresentation::cyclic(4)},
                                      std::pair{std::string("Z2xZ2"), GroupPresentation::klein_four()}}) {
            if (auto phi = find_isomorphism(s, make_group(g), tol)) {
                v.tag = ClassTag::Depth2;
                v.group = name;
                v.group_isomorphism = std::move(phi);
                v.log.push_back("isomorphic to the group structure of " + name);
                return v;
            }
        }
        return refuse("depth2_unidentified", "depth 2 but no group table matches");
    }
    v.log.push_back("depth-2 support has trace " + fmt(trace(d2).real()));

    // (ii) virtual normalizers and free splits
    for (std::size_t i : normalizer_order(minimal)) {
        const double t = trace(minimal[i]).real();
        bool vn = false;
        try {
            vn = is_virtual_normalizer(minimal[i], Side::Both, tol);
        } catch (const Error& e) {
            v.log.push_back(std::string("virtual normalizer test failed: ") + e.what());
        }
        if (!vn) continue;
        v.log.push_back("minimal projection " + std::to_string(i) + " (trace " + fmt(t) + ") is a virtual normalizer");
        try {
            const SeparatingResult r = find_separating_biprojection(minimal[i], tol);
            const FreeSeparation fs = free_separation(r.biprojection.element, tol);
            v.log.push_back("separating biprojection of trace " + fmt(r.biprojection.trace) + " splits " +
                            std::to_string(fs.inner_dim) + " + " + std::to_string(fs.outer_dim));
            if (fs.separating) {
                v.free_witnesses.push_back({i, t, r.construction, r.biprojection, fs});
                break;
            }
        } catch (const Error& e) {
            v.log.push_back(std::string("separating biprojection failed: ") + e.what());
        }
    }
    std::vector<Biprojection> biprojections;
    try {
        biprojections = enumerate_biprojections(s, tol);
    } catch (const Error& e) {
        v.log.push_back(std::string("biprojection enumeration failed: ") + e.what());
    }
    if (v.free_witnesses.empty())
        for (const auto& b : biprojections) {
            if (!nontrivial(b, s, tol)) continue;
            const FreeSeparation fs = free_separation(b.element, tol);
            if (fs.separating) {
                v.log.push_back("biprojection of trace " + fmt(b.trace) + " separates as a free product");
                v.free_witnesses.push_back({0, 0, 0, b, fs});
                break;
            }
        }

    // (iii) tensor splits
    for (std::size_t i = 0; i < biprojections.size(); ++i)
        for (std::size_t j = i + 1; j < biprojections.size(); ++j) {
            const auto& a = biprojections[i];
            const auto& b = biprojections[j];
            if (!nontrivial(a, s, tol) || !nontrivial(b, s, tol)) continue;
            if (is_tensor_separating(a.element, b.element, tol)) {
                v.log.push_back("biprojections of traces " + fmt(a.trace) + " and " + fmt(b.trace) +
                                " separate as a tensor product");
                v.tensor_witnesses.push_back({a, b});
            }
        }
    if (!v.free_witnesses.empty()) {
        v.tag = ClassTag::FreeProductSplit;
        return v;
    }
    if (!v.tensor_witnesses.empty()) {
        v.tag = ClassTag::TensorSplit;
        return v;
    }

    // (iv) full 3x3 new part
    if (npd == 9) {
        std::string reason;
        if (auto w = analyse_full_block(s, minimal, tol, v.log, reason)) {
            v.tag = ClassTag::SubgroupZ2Z7;
            v.subgroup = std::move(w);
            return v;
        }
        return refuse(reason, "case (d) analysis did not close");
    }
    return refuse("no_case_matched", "no depth-2, free, tensor or full-block case applies");
}

// ---------------------------------------------------------------------------
// Commute-relation report

namespace {

std::optional<std::string> identify_depth2(const StructurePtr& s, const Tolerance& tol) {
    std::vector<std::pair<std::string, GroupPresentation>> candidates = {{"Z" + std::to_string(s->dim()),
                                                                         GroupPresentation::cyclic(s->dim())}};
    if (s->dim() == 4) candidates.emplace_back("Z2xZ2", GroupPresentation::klein_four());
    if (s->dim() == 6) candidates.emplace_back("S3", GroupPresentation::symmetric3());
    for (const auto& [name, g] : candidates) {
        try {
            if (find_isomorphism(s, make_group(g), tol)) return name;
        } catch (const Error&) {
        }
    }
    return std::nullopt;
}

SplitNode split(const StructurePtr& s, const Tolerance& tol, int depth) {
    SplitNode node;
    node.dim = s->dim();
    node.delta = s->delta();
    if (s->dim() <= 2) {
        node.kind = "dim2";
        node.identified = std::abs(s->delta() * s->delta() - 2.0) <= 1e-9 ? std::string("Z2")
                                                                           : "TL(" + fmt(s->delta()) + ")";
        return node;
    }
    BlockDecomposition blocks;
    try {
        blocks = block_decomposition(s, tol);
    } catch (const Error&) {
        node.kind = "unsplit";
        return node;
    }
    if (blocks.abelian() && depth < 16) {
        const auto minimal = blocks.all_minimal_projections();
        for (std::size_t i : normalizer_order(minimal)) {
            try {
                if (!is_virtual_normalizer(minimal[i], Side::Both, tol)) continue;
                const SeparatingResult r = find_separating_biprojection(minimal[i], tol);
                if (!is_free_separating(r.biprojection.element, tol)) continue;
                node.kind = "free";
                node.separator_trace = r.biprojection.trace;
                node.children.push_back(split(cut_down_inner(r.biprojection.element, tol), tol, depth + 1));
                node.children.push_back(split(cut_down_outer(r.biprojection.element, tol), tol, depth + 1));
                return node;
            } catch (const Error&) {
            }
        }
    }
    try {
        if (residual(depth2_support(s, tol), s->unit()) <= tol.eq_tol) {
            node.kind = "depth2";
            node.identified = identify_depth2(s, tol);
            return node;
        }
    } catch (const Error&) {
    }
    node.kind = "unsplit";
    return node;
}

}  // namespace

CommuteReport check_commute_relation_necessary(const StructurePtr& s, const Tolerance& tol) {
    CommuteReport r;
    const BlockDecomposition blocks = block_decomposition(s, tol);
    r.product_abelian = blocks.abelian();
    r.dual_abelian = coproduct_commutative(s, tol);
    Element support = s->jones();
    if (r.product_abelian && r.dual_abelian) {
        support = depth2_support(s, tol);
        r.depth2 = residual(support, s->unit()) <= tol.eq_tol;
    }
    const auto minimal = blocks.all_minimal_projections();
    bool any = false;
    for (std::size_t i = 1; i < minimal.size(); ++i) {
        if (norm2(multiply(minimal[i], support).coeffs()) > tol.eq_tol) continue;
        NormalizerEntry entry{i, trace(minimal[i]).real(), false};
        try {
            entry.virtual_normalizer = is_virtual_normalizer(minimal[i], Side::Both, tol);
        } catch (const Error&) {
        }
        any = any || entry.virtual_normalizer;
        r.inventory.push_back(entry);
    }
    if (any) {
        SplitNode tree = split(s, tol, 0);
        if (tree.kind == "free") r.split_tree = std::move(tree);
    }
    return r;
}

std::vector<std::size_t> split_leaf_dims(const SplitNode& node) {
    if (node.children.empty()) return {node.dim};
    std::vector<std::size_t> out;
    for (const auto& c : node.children) {
        const auto sub = split_leaf_dims(c);
        out.insert(out.end(), sub.begin(), sub.end());
    }
    return out;
}

}  // namespace twobox
