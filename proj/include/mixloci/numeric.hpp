#pragma once

// Dense complex linear algebra used by every other module: Hermitian
// eigendecomposition (cyclic Jacobi), SVD (one-sided Jacobi), numerical rank
// and null spaces under a single shared tolerance policy.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "mixloci/error.hpp"

namespace mixloci {

using cplx = std::complex<double>;
using CVector = std::vector<cplx>;

/// Row-major dense complex matrix; entry (i, j) lives at i * cols + j.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    /// Throws InvalidInput on a size mismatch or a non-finite entry.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix diagonal(std::span<const double> diag);
    static ComplexMatrix from_columns(std::span<const CVector> columns, std::size_t rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return data_.empty(); }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const cplx> entries() const noexcept { return data_; }
    std::span<cplx> entries() noexcept { return data_; }

    CVector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const cplx> values);

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;
    cplx trace() const;
    double frobenius_norm() const;
    bool is_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(cplx scale);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) { return a *= s; }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

CVector operator*(const ComplexMatrix& a, std::span<const cplx> x);

/// Kronecker product a ⊗ b.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// <a, b> = sum conj(a_i) b_i.
cplx inner(std::span<const cplx> a, std::span<const cplx> b);
double norm2(std::span<const cplx> v);

/// Rank threshold for a matrix M is max(rank_rel_tol * sigma_max(M) * max(rows, cols), abs_floor).
struct ToleranceConfig {
    double rank_rel_tol = 1e-8;
    double abs_floor = 1e-12;

    double threshold(double sigma_max, std::size_t rows, std::size_t cols) const;
};

struct SVDResult {
    std::vector<double> singular_values;  // min(rows, cols) values, nonincreasing
    ComplexMatrix left_vectors;           // rows x rows, unitary
    ComplexMatrix right_vectors;          // cols x cols, unitary

    double sigma_max() const { return singular_values.empty() ? 0.0 : singular_values.front(); }
};

struct EigResult {
    std::vector<double> eigenvalues;  // nonincreasing
    ComplexMatrix eigenvectors;       // columns
};

EigResult hermitian_eig(const ComplexMatrix& h);
SVDResult svd(const ComplexMatrix& m);

/// Singular values of m only (same algorithm, skips building the unitary factors' completion).
std::vector<double> singular_values(const ComplexMatrix& m);

/// Count of singular values strictly above the shared threshold.
std::size_t rank_from_singular_values(std::span<const double> sv, std::size_t rows, std::size_t cols,
                                      const ToleranceConfig& tol);

std::size_t numerical_rank(const ComplexMatrix& m, const ToleranceConfig& tol = {});

/// Orthonormal basis of the right null space, one vector per column; zero columns when trivial.
ComplexMatrix null_space(const ComplexMatrix& m, const ToleranceConfig& tol = {});

} // namespace mixloci
