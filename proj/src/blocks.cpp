#include "twobox/blocks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "twobox/errors.hpp"

namespace twobox {

namespace {

struct Cluster {
    double value;
    std::size_t multiplicity;
    ComplexMatrix projection;
};

// Groups eigenvalues whose consecutive gaps are below `gap`.
std::vector<Cluster> cluster_spectrum(const HermitianEig& eig, double gap) {
    const std::size_t n = eig.eigenvalues.size();
    std::vector<Cluster> out;
    std::size_t start = 0;
    while (start < n) {
        std::size_t end = start + 1;
        while (end < n && eig.eigenvalues[end] - eig.eigenvalues[end - 1] <= gap) ++end;
        ComplexMatrix p(n, n);
        double mean = 0;
        for (std::size_t k = start; k < end; ++k) {
            mean += eig.eigenvalues[k];
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    p(i, j) += eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
        }
        out.push_back({mean / double(end - start), end - start, std::move(p)});
        start = end;
    }
    return out;
}

std::size_t leading_index(const Element& x) {
    const double scale = norm2(x.coeffs());
    for (std::size_t i = 0; i < x.size(); ++i)
        if (std::abs(x[i]) > 1e-8 * std::max(1.0, scale)) return i;
    return x.size();
}

// Deterministic order: leading basis index, then trace, then the leading coefficient.
bool element_order(const Element& a, const Element& b) {
    const std::size_t ia = leading_index(a), ib = leading_index(b);
    if (ia != ib) return ia < ib;
    const double ta = trace(a).real(), tb = trace(b).real();
    if (std::abs(ta - tb) > 1e-8) return ta < tb;
    if (ia < a.size()) return a[ia].real() > b[ib].real();
    return false;
}

ComplexMatrix centre_basis(const StructurePtr& s, const Tolerance& tol) {
    const std::size_t n = s->dim();
    ComplexMatrix commutators(n * n, n);
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
            const CVector& kj = s->product_row(k, j);
            const CVector& jk = s->product_row(j, k);
            for (std::size_t m = 0; m < n; ++m) commutators(j * n + m, k) = kj[m] - jk[m];
        }
    return null_space(commutators, tol);
}

constexpr double kClusterGap = 1e-6;
constexpr int kAttempts = 8;

}  // namespace

bool BlockDecomposition::abelian() const {
    return std::all_of(block_dims.begin(), block_dims.end(), [](std::size_t d) { return d == 1; });
}

std::vector<Element> BlockDecomposition::all_minimal_projections() const {
    std::vector<Element> out;
    for (const auto& block : minimal_projections) out.insert(out.end(), block.begin(), block.end());
    return out;
}

BlockDecomposition block_decomposition(const StructurePtr& s, const Tolerance& tol) {
    const std::size_t n = s->dim();
    const ComplexMatrix centre = centre_basis(s, tol);
    const std::size_t m = centre.cols();
    if (m == 0) throw Error(ErrorCode::NumericallyDegenerate, "product algebra has trivial centre");

    std::mt19937_64 rng(0x5eed0001);
    std::uniform_real_distribution<double> coef(1.0, 2.0);

    std::vector<Cluster> blocks;
    for (int attempt = 0; attempt < kAttempts && blocks.size() != m; ++attempt) {
        CVector z(n);
        for (std::size_t k = 0; k < m; ++k) {
            const Complex w(coef(rng), coef(rng));
            for (std::size_t i = 0; i < n; ++i) z[i] += w * centre(i, k);
        }
        const Element zc = s->element(z);
        const Element h = zc + adjoint(zc);
        const ComplexMatrix op = regular_operator(h);
        const HermitianEig eig = hermitian_eig(op, tol);
        const double spread = eig.eigenvalues.back() - eig.eigenvalues.front();
        blocks = cluster_spectrum(eig, kClusterGap * (1.0 + spread));
    }
    if (blocks.size() != m)
        throw Error(ErrorCode::NumericallyDegenerate, "could not separate the centre into blocks");

    struct Block {
        Element central;
        std::size_t dim;
    };
    std::vector<Block> found;
    for (const auto& c : blocks) {
        const auto d = static_cast<std::size_t>(std::llround(std::sqrt(double(c.multiplicity))));
        if (d * d != c.multiplicity)
            throw Error(ErrorCode::NumericallyDegenerate, "block multiplicity is not a square");
        found.push_back({element_from_regular(s, c.projection), d});
    }

    const Element e = s->jones();
    std::stable_sort(found.begin(), found.end(), [&](const Block& a, const Block& b) {
        const bool ae = residual(a.central, e) <= tol.eq_tol, be = residual(b.central, e) <= tol.eq_tol;
        if (ae != be) return ae;
        return element_order(a.central, b.central);
    });

    BlockDecomposition out;
    for (const auto& b : found) {
        std::vector<Element> minimal;
        if (b.dim == 1) {
            minimal.push_back(b.central);
        } else {
            const ComplexMatrix c_op = regular_operator(b.central);
            for (int attempt = 0; attempt < kAttempts && minimal.size() != b.dim; ++attempt) {
                minimal.clear();
                const Element k = random_self_adjoint(s, rng);
                const Element x = multiply(multiply(b.central, k), b.central);
                ComplexMatrix op = regular_operator(x);
                const double shift = 10.0 * (1.0 + op.frobenius_norm());
                op += c_op * Complex(shift);
                const HermitianEig eig = hermitian_eig(op, tol);
                const double spread = eig.eigenvalues.back() - eig.eigenvalues.front();
                for (const auto& cl : cluster_spectrum(eig, kClusterGap * (1.0 + spread))) {
                    if (cl.value < shift / 2) continue;
                    if (cl.multiplicity != b.dim) {
                        minimal.clear();
                        break;
                    }
                    minimal.push_back(element_from_regular(s, cl.projection));
                }
            }
            if (minimal.size() != b.dim)
                throw Error(ErrorCode::NumericallyDegenerate, "could not split a matrix block");
        }
        out.central_idempotents.push_back(b.central);
        out.block_dims.push_back(b.dim);
        out.block_traces.push_back(trace(b.central).real() / double(b.dim));
        out.minimal_projections.push_back(std::move(minimal));
    }
    return out;
}

bool is_self_adjoint(const Element& x, const Tolerance& tol) { return residual(x, adjoint(x)) <= tol.eq_tol; }

bool is_projection(const Element& x, const Tolerance& tol) {
    return is_self_adjoint(x, tol) && residual(multiply(x, x), x) <= tol.eq_tol;
}

bool is_central(const Element& x, const Tolerance& tol) {
    const auto& s = x.owner();
    for (std::size_t i = 0; i < s->dim(); ++i) {
        const Element b = s->basis(i);
        if (residual(multiply(x, b), multiply(b, x)) > tol.eq_tol) return false;
    }
    return true;
}

double min_eigenvalue(const Element& x, const Tolerance& tol) {
    return hermitian_eig(regular_operator(x), tol).eigenvalues.front();
}

bool is_positive(const Element& x, const Tolerance& tol) {
    if (!is_self_adjoint(x, tol)) return false;
    const HermitianEig eig = hermitian_eig(regular_operator(x), tol);
    const double scale = std::max({1.0, std::abs(eig.eigenvalues.front()), std::abs(eig.eigenvalues.back())});
    return eig.eigenvalues.front() >= -tol.rank_tol * scale;
}

Element support(const Element& x, const Tolerance& tol) {
    return element_from_regular(x.owner(), support_projection(regular_operator(x), tol));
}

bool precedes(const Element& x, const Element& y, const Tolerance& tol) {
    const Element sx = support(x, tol);
    const Element sy = support(y, tol);
    return residual(multiply(sy, sx), sx) <= tol.eq_tol;
}

std::size_t rank(const Element& x, const BlockDecomposition& blocks, const Tolerance& tol) {
    if (!is_positive(x, tol)) throw Error(ErrorCode::NotPositive, "rank needs a positive element");
    std::size_t total = 0;
    for (std::size_t i = 0; i < blocks.block_count(); ++i) {
        const ComplexMatrix op = regular_operator(multiply(x, blocks.central_idempotents[i]));
        const std::size_t r = matrix_rank(op, tol);
        const std::size_t d = blocks.block_dims[i];
        total += (r + d / 2) / d;
    }
    return total;
}

std::size_t rank(const Element& x, const Tolerance& tol) {
    return rank(x, block_decomposition(x.owner(), tol), tol);
}

Element random_element(const StructurePtr& s, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    CVector z(s->dim());
    for (auto& c : z) c = Complex(g(rng), g(rng));
    return s->element(s->from_orthonormal() * std::span<const Complex>(z));
}

Element random_self_adjoint(const StructurePtr& s, std::mt19937_64& rng) {
    const Element y = random_element(s, rng);
    return 0.5 * (y + adjoint(y));
}

Element random_positive(const StructurePtr& s, std::mt19937_64& rng) {
    const Element y = random_element(s, rng);
    const Element x = multiply(adjoint(y), y);
    return (1.0 / trace(x).real()) * x;
}

Element random_unitary(const StructurePtr& s, std::mt19937_64& rng) {
    const Element h = random_self_adjoint(s, rng);
    const HermitianEig eig = hermitian_eig(regular_operator(h));
    const std::size_t n = s->dim();
    ComplexMatrix u(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex phase = std::exp(Complex(0, eig.eigenvalues[k]));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                u(i, j) += phase * eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
    }
    return element_from_regular(s, u);
}

}  // namespace twobox
