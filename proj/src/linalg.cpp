#include "twobox/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "twobox/errors.hpp"

namespace twobox {

void Tolerance::validate() const {
    constexpr double floor = 100 * std::numeric_limits<double>::epsilon();
    if (!(eq_tol > 0) || !(rank_tol > 0) || !(roundtrip_tol > 0) || eq_tol < floor) {
        std::ostringstream os;
        os << "invalid tolerance (eq_tol=" << eq_tol << ", rank_tol=" << rank_tol
           << ", roundtrip_tol=" << roundtrip_tol << ")";
        throw Error(ErrorCode::BadShape, os.str());
    }
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_)
        throw Error(ErrorCode::BadShape, "entry count does not match rows*cols");
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) throw Error(ErrorCode::BadShape, "ragged initializer");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const CVector> columns, std::size_t rows) {
    ComplexMatrix m(rows, columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) m.set_column(c, columns[c]);
    return m;
}

CVector ComplexMatrix::column(std::size_t c) const {
    CVector v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = (*this)(r, c);
    return v;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const Complex> v) {
    if (v.size() != rows_) throw Error(ErrorCode::BadShape, "column length mismatch");
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = v[r];
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix m(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
    return m;
}

double ComplexMatrix::frobenius_norm() const { return norm2(data_); }

Complex ComplexMatrix::trace() const {
    Complex t = 0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::BadShape, "shape mismatch in +");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw Error(ErrorCode::BadShape, "shape mismatch in -");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& x : data_) x *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::BadShape, "shape mismatch in matrix product");
    ComplexMatrix m(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex(0)) continue;
            for (std::size_t j = 0; j < b.cols_; ++j) m(i, j) += aik * b(k, j);
        }
    return m;
}

CVector operator*(const ComplexMatrix& a, std::span<const Complex> v) {
    if (a.cols_ != v.size()) throw Error(ErrorCode::BadShape, "shape mismatch in matrix-vector product");
    CVector out(a.rows_);
    for (std::size_t i = 0; i < a.rows_; ++i) {
        Complex s = 0;
        for (std::size_t k = 0; k < a.cols_; ++k) s += a(i, k) * v[k];
        out[i] = s;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Vector helpers

double norm2(std::span<const Complex> v) {
    double s = 0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

Complex dot(std::span<const Complex> a, std::span<const Complex> b) {
    Complex s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

CVector axpy(Complex alpha, std::span<const Complex> x, std::span<const Complex> y) {
    CVector out(y.begin(), y.end());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += alpha * x[i];
    return out;
}

double relative_difference(std::span<const Complex> a, std::span<const Complex> b) {
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += std::norm(a[i] - b[i]);
    return std::sqrt(d) / (1.0 + std::max(norm2(a), norm2(b)));
}

double relative_difference(const ComplexMatrix& a, const ComplexMatrix& b) {
    return relative_difference(std::span<const Complex>(a.entries()),
                               std::span<const Complex>(b.entries()));
}

double hermitian_defect(const ComplexMatrix& H) {
    if (!H.square()) throw Error(ErrorCode::NotSquare, "matrix is not square");
    double s = 0;
    for (std::size_t i = 0; i < H.rows(); ++i)
        for (std::size_t j = 0; j < H.cols(); ++j) s += std::norm(H(i, j) - std::conj(H(j, i)));
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Jacobi kernels

namespace {

// Unitary U with U^dagger [[a, b], [conj(b), d]] U diagonal (a, d real).
struct Rotation {
    Complex u00, u01, u10, u11;
};

Rotation hermitian_rotation(double a, double d, Complex b) {
    const double r = std::abs(b);
    const Complex phase = b / r;  // e^{i phi}
    const double tau = (d - a) / (2.0 * r);
    const double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const Complex ph = std::conj(phase);
    return {c, s, -s * ph, c * ph};
}

void rotate_columns(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& u) {
    for (std::size_t k = 0; k < m.rows(); ++k) {
        const Complex xp = m(k, p), xq = m(k, q);
        m(k, p) = xp * u.u00 + xq * u.u10;
        m(k, q) = xp * u.u01 + xq * u.u11;
    }
}

void rotate_rows_adjoint(ComplexMatrix& m, std::size_t p, std::size_t q, const Rotation& u) {
    for (std::size_t k = 0; k < m.cols(); ++k) {
        const Complex xp = m(p, k), xq = m(q, k);
        m(p, k) = std::conj(u.u00) * xp + std::conj(u.u10) * xq;
        m(q, k) = std::conj(u.u01) * xp + std::conj(u.u11) * xq;
    }
}

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

constexpr int kMaxSweeps = 100;

}  // namespace

HermitianEig hermitian_eig(const ComplexMatrix& H, const Tolerance& tol) {
    if (!H.square()) throw Error(ErrorCode::NotSquare, "hermitian_eig needs a square matrix");
    const double scale = H.frobenius_norm();
    if (!std::isfinite(scale)) throw Error(ErrorCode::NotHermitian, "matrix has non-finite entries");
    if (hermitian_defect(H) > tol.eq_tol * (1.0 + scale))
        throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian within eq_tol");

    const std::size_t n = H.rows();
    ComplexMatrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) = 0.5 * (H(i, j) + std::conj(H(j, i)));
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double stop = std::max(1e-15 * scale, std::numeric_limits<double>::min());
    int sweep = 0;
    for (; sweep < kMaxSweeps && off_diagonal_norm(a) > stop; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex b = a(p, q);
                if (std::abs(b) <= std::numeric_limits<double>::min()) continue;
                const Rotation u = hermitian_rotation(a(p, p).real(), a(q, q).real(), b);
                rotate_columns(a, p, q, u);
                rotate_rows_adjoint(a, p, q, u);
                a(p, q) = a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                rotate_columns(v, p, q, u);
            }
    }
    if (off_diagonal_norm(a) > stop)
        throw Error(ErrorCode::NoConvergence, "Jacobi iteration cap reached");

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });
    HermitianEig out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
    }
    return out;
}

SingularValues singular_values(const ComplexMatrix& A) {
    const std::size_t n = A.cols();
    ComplexMatrix a = A;
    ComplexMatrix v = ComplexMatrix::identity(n);
    constexpr double eps = std::numeric_limits<double>::epsilon();
    // Columns that are pure rounding noise cannot be orthogonalized further.
    const double fro2 = A.frobenius_norm() * A.frobenius_norm();
    const double noise = eps * eps * fro2;

    bool converged = n < 2;
    for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
        converged = true;
        for (std::size_t p = 0; p + 1 < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                double alpha = 0, beta = 0;
                Complex gamma = 0;
                for (std::size_t k = 0; k < a.rows(); ++k) {
                    alpha += std::norm(a(k, p));
                    beta += std::norm(a(k, q));
                    gamma += std::conj(a(k, p)) * a(k, q);
                }
                if (std::abs(gamma) <= eps * std::sqrt(alpha * beta) || std::abs(gamma) <= noise ||
                    std::abs(gamma) <= std::numeric_limits<double>::min())
                    continue;
                converged = false;
                const Rotation u = hermitian_rotation(alpha, beta, gamma);
                rotate_columns(a, p, q, u);
                rotate_columns(v, p, q, u);
            }
    }
    if (!converged) throw Error(ErrorCode::NoConvergence, "one-sided Jacobi iteration cap reached");

    std::vector<double> sigma(n);
    for (std::size_t c = 0; c < n; ++c) sigma[c] = norm2(a.column(c));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });
    SingularValues out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = sigma[order[k]];
        for (std::size_t r = 0; r < n; ++r) out.right(r, k) = v(r, order[k]);
    }
    return out;
}

namespace {

double rank_threshold(const std::vector<double>& sigma, const Tolerance& tol) {
    const double top = sigma.empty() ? 0.0 : sigma.front();
    return tol.rank_tol * std::max(1.0, top);
}

ComplexMatrix projector_from(const HermitianEig& eig, auto keep) {
    const std::size_t n = eig.eigenvalues.size();
    ComplexMatrix p(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        if (!keep(eig.eigenvalues[k])) continue;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                p(i, j) += eig.eigenvectors(i, k) * std::conj(eig.eigenvectors(j, k));
    }
    return p;
}

}  // namespace

ComplexMatrix support_projection(const ComplexMatrix& X, const Tolerance& tol) {
    const HermitianEig eig = hermitian_eig(X, tol);
    if (eig.eigenvalues.empty()) return X;
    const double lo = eig.eigenvalues.front();
    const double hi = eig.eigenvalues.back();
    const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    if (lo < -tol.rank_tol * scale)
        throw Error(ErrorCode::NotPositive, "support_projection: matrix has a negative eigenvalue");
    const double thr = tol.rank_tol * std::max(1.0, hi);
    return projector_from(eig, [thr](double l) { return l > thr; });
}

ComplexMatrix spectral_projection_max(const ComplexMatrix& H, const Tolerance& tol) {
    const HermitianEig eig = hermitian_eig(H, tol);
    if (eig.eigenvalues.empty()) return H;
    const double top = eig.eigenvalues.back();
    const double gap = tol.rank_tol * (1.0 + std::abs(top));
    return projector_from(eig, [top, gap](double l) { return l >= top - gap; });
}

std::size_t matrix_rank(const ComplexMatrix& A, const Tolerance& tol) {
    if (A.rows() == 0 || A.cols() == 0) return 0;
    // Work with the wider side so the column count stays small.
    const SingularValues sv = A.rows() < A.cols() ? singular_values(A.adjoint()) : singular_values(A);
    const double thr = rank_threshold(sv.values, tol);
    return static_cast<std::size_t>(
        std::count_if(sv.values.begin(), sv.values.end(), [thr](double s) { return s > thr; }));
}

ComplexMatrix null_space(const ComplexMatrix& A, const Tolerance& tol) {
    const std::size_t n = A.cols();
    const SingularValues sv = singular_values(A);
    const double thr = rank_threshold(sv.values, tol);
    std::vector<CVector> basis;
    for (std::size_t k = 0; k < n; ++k)
        if (sv.values[k] <= thr) basis.push_back(sv.right.column(k));
    return ComplexMatrix::from_columns(basis, n);
}

CVector solve_least_squares(const ComplexMatrix& A, std::span<const Complex> b,
                            const Tolerance& tol) {
    if (A.rows() != b.size()) throw Error(ErrorCode::BadShape, "least squares: length mismatch");
    const std::size_t n = A.cols();
    const SingularValues sv = singular_values(A);
    const double thr = rank_threshold(sv.values, tol);
    CVector x(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = sv.values[k];
        if (s <= thr) break;
        const CVector vk = sv.right.column(k);
        const CVector avk = A * std::span<const Complex>(vk);
        const Complex coef = dot(avk, b) / (s * s);
        for (std::size_t i = 0; i < n; ++i) x[i] += coef * vk[i];
    }
    return x;
}

}  // namespace twobox
