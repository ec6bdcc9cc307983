#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace twobox {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;

// One tolerance record is threaded through every module.
//   eq_tol        relative Frobenius tolerance for equalities
//   rank_tol      relative threshold below which a singular value/eigenvalue counts as zero
//   roundtrip_tol serialization round-trip tolerance
struct Tolerance {
    double eq_tol = 1e-9;
    double rank_tol = 1e-8;
    double roundtrip_tol = 1e-12;

    // Throws Error(BadShape) when a field is non-positive or eq_tol is below 100 ulp.
    void validate() const;
};

// Dense row-major complex matrix.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> values);
    // Columns of the result are the given vectors.
    static ComplexMatrix from_columns(std::span<const CVector> columns, std::size_t rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool square() const noexcept { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    const std::vector<Complex>& entries() const noexcept { return data_; }

    CVector column(std::size_t c) const;
    void set_column(std::size_t c, std::span<const Complex> v);

    ComplexMatrix adjoint() const;
    double frobenius_norm() const;
    Complex trace() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
    friend CVector operator*(const ComplexMatrix& a, std::span<const Complex> v);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> data_;
};

struct HermitianEig {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // unitary, eigenvectors in columns
};

struct SingularValues {
    std::vector<double> values;  // descending
    ComplexMatrix right;         // columns are right singular vectors, same order
};

// Cyclic complex Jacobi, at most 100 sweeps.
HermitianEig hermitian_eig(const ComplexMatrix& H, const Tolerance& tol = {});

// One-sided (Hestenes) Jacobi on the columns of A.
SingularValues singular_values(const ComplexMatrix& A);

// Orthogonal projection onto eigenvectors with eigenvalue > rank_tol * max(1, lambda_max).
ComplexMatrix support_projection(const ComplexMatrix& X, const Tolerance& tol = {});

// Projection onto the top eigenspace; eigenvalues within rank_tol * (1 + |lambda_max|)
// of the maximum are grouped together.
ComplexMatrix spectral_projection_max(const ComplexMatrix& H, const Tolerance& tol = {});

std::size_t matrix_rank(const ComplexMatrix& A, const Tolerance& tol = {});

// Orthonormal basis (columns) of ker A.
ComplexMatrix null_space(const ComplexMatrix& A, const Tolerance& tol = {});

// Minimum-norm least squares solution of A x = b.
CVector solve_least_squares(const ComplexMatrix& A, std::span<const Complex> b,
                            const Tolerance& tol = {});

double hermitian_defect(const ComplexMatrix& H);  // ||H - H^dagger||_F

// Vector helpers.
double norm2(std::span<const Complex> v);
Complex dot(std::span<const Complex> a, std::span<const Complex> b);  // a^dagger b
CVector axpy(Complex alpha, std::span<const Complex> x, std::span<const Complex> y);
// ||a - b|| / (1 + max(||a||, ||b||))
double relative_difference(std::span<const Complex> a, std::span<const Complex> b);
double relative_difference(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace twobox
