#include "mixloci/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mixloci {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidInput: return "InvalidInput";
    case ErrorCode::NotSquare: return "NotSquare";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotDensity: return "NotDensity";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::WeightSumInvalid: return "WeightSumInvalid";
    case ErrorCode::RankOutOfRange: return "RankOutOfRange";
    case ErrorCode::InvalidK: return "InvalidK";
    case ErrorCode::NotOnLocus: return "NotOnLocus";
    case ErrorCode::ParameterOutOfRange: return "ParameterOutOfRange";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// ComplexMatrix

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0})
{
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries))
{
    if (data_.size() != rows_ * cols_) {
        throw Error(ErrorCode::InvalidInput, "matrix entry count " + std::to_string(data_.size()) +
                                                 " does not match " + std::to_string(rows_) + "x" +
                                                 std::to_string(cols_));
    }
    if (!is_finite()) {
        throw Error(ErrorCode::InvalidInput, "matrix has non-finite entries");
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n)
{
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> diag)
{
    ComplexMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
}

ComplexMatrix ComplexMatrix::from_columns(std::span<const CVector> columns, std::size_t rows)
{
    ComplexMatrix m(rows, columns.size());
    for (std::size_t j = 0; j < columns.size(); ++j) m.set_column(j, columns[j]);
    return m;
}

CVector ComplexMatrix::column(std::size_t j) const
{
    CVector c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
}

void ComplexMatrix::set_column(std::size_t j, std::span<const cplx> values)
{
    if (values.size() != rows_) {
        throw Error(ErrorCode::DimensionMismatch, "column length does not match row count");
    }
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

ComplexMatrix ComplexMatrix::adjoint() const
{
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const
{
    ComplexMatrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

cplx ComplexMatrix::trace() const
{
    cplx t = 0.0;
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

double ComplexMatrix::frobenius_norm() const
{
    double s = 0.0;
    for (const auto& z : data_) s += std::norm(z);
    return std::sqrt(s);
}

bool ComplexMatrix::is_finite() const
{
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other)
{
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error(ErrorCode::DimensionMismatch, "matrix sum of different shapes");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other)
{
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw Error(ErrorCode::DimensionMismatch, "matrix difference of different shapes");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cplx scale)
{
    for (auto& z : data_) z *= scale;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b)
{
    if (a.cols() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "matrix product shape mismatch");
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t l = 0; l < a.cols(); ++l) {
            const cplx ail = a(i, l);
            if (ail == cplx{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += ail * b(l, j);
        }
    }
    return out;
}

CVector operator*(const ComplexMatrix& a, std::span<const cplx> x)
{
    if (a.cols() != x.size()) throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape mismatch");
    CVector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        y[i] = s;
    }
    return y;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b)
{
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

cplx inner(std::span<const cplx> a, std::span<const cplx> b)
{
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "inner product length mismatch");
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
}

double norm2(std::span<const cplx> v)
{
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s);
}

double ToleranceConfig::threshold(double sigma_max, std::size_t rows, std::size_t cols) const
{
    const auto dim = static_cast<double>(std::max(rows, cols));
    return std::max(rank_rel_tol * sigma_max * dim, abs_floor);
}

// ---------------------------------------------------------------------------
// Jacobi machinery

namespace {

// Unitary G acting on coordinates (p, q) that diagonalizes the Hermitian 2x2
// block [[app, apq], [conj(apq), aqq]] under G^H (.) G.
struct JacobiRotation {
    double c = 1.0;
    double s = 0.0;
    cplx phase_conj = 1.0;  // e^{-i arg(apq)}

    cplx gpp() const { return c; }
    cplx gpq() const { return s; }
    cplx gqp() const { return -s * phase_conj; }
    cplx gqq() const { return c * phase_conj; }
};

JacobiRotation make_rotation(double app, double aqq, cplx apq)
{
    const double mag = std::abs(apq);
    JacobiRotation rot;
    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::hypot(theta, 1.0));
    rot.c = 1.0 / std::sqrt(t * t + 1.0);
    rot.s = t * rot.c;
    rot.phase_conj = std::conj(apq) / mag;
    return rot;
}

// X <- X G restricted to columns p, q.
void rotate_columns(ComplexMatrix& x, std::size_t p, std::size_t q, const JacobiRotation& g)
{
    for (std::size_t k = 0; k < x.rows(); ++k) {
        const cplx xp = x(k, p);
        const cplx xq = x(k, q);
        x(k, p) = xp * g.gpp() + xq * g.gqp();
        x(k, q) = xp * g.gpq() + xq * g.gqq();
    }
}

// X <- G^H X restricted to rows p, q.
void rotate_rows(ComplexMatrix& x, std::size_t p, std::size_t q, const JacobiRotation& g)
{
    for (std::size_t k = 0; k < x.cols(); ++k) {
        const cplx xp = x(p, k);
        const cplx xq = x(q, k);
        x(p, k) = std::conj(g.gpp()) * xp + std::conj(g.gqp()) * xq;
        x(q, k) = std::conj(g.gpq()) * xp + std::conj(g.gqq()) * xq;
    }
}

void require_finite(const ComplexMatrix& m)
{
    if (!m.is_finite()) throw Error(ErrorCode::InvalidInput, "matrix has non-finite entries");
}

std::vector<std::size_t> order_descending(std::span<const double> values)
{
    std::vector<std::size_t> idx(values.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return idx;
}

// Orthogonalizes v against the first `count` columns of basis (two passes).
void orthogonalize_against(CVector& v, const ComplexMatrix& basis, std::size_t count)
{
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t j = 0; j < count; ++j) {
            cplx proj = 0.0;
            for (std::size_t i = 0; i < basis.rows(); ++i) proj += std::conj(basis(i, j)) * v[i];
            for (std::size_t i = 0; i < basis.rows(); ++i) v[i] -= proj * basis(i, j);
        }
    }
}

// Builds a unitary whose leading columns are the normalized `candidates`
// (in order); candidates that are zero or collapse under orthogonalization are
// replaced by completion vectors drawn from the standard basis.
ComplexMatrix orthonormal_completion(const std::vector<CVector>& candidates, std::size_t dim)
{
    ComplexMatrix u(dim, dim);
    std::size_t filled = 0;
    std::vector<std::size_t> holes;
    for (const auto& cand : candidates) {
        CVector v = cand;
        const double before = norm2(v);
        bool ok = before > 0.0;
        if (ok) {
            for (auto& z : v) z /= before;
            orthogonalize_against(v, u, filled);
            const double after = norm2(v);
            ok = after > 1e-3;
            if (ok)
                for (auto& z : v) z /= after;
        }
        if (ok) {
            u.set_column(filled, v);
        } else {
            holes.push_back(filled);
        }
        ++filled;
        // Holes are zero columns, which orthogonalize_against treats as no-ops.
    }
    std::size_t next_basis = 0;
    auto fill_one = [&](std::size_t col, std::size_t count) {
        while (next_basis < dim) {
            CVector e(dim, 0.0);
            e[next_basis++] = 1.0;
            orthogonalize_against(e, u, count);
            const double nrm = norm2(e);
            if (nrm > 1e-3) {
                for (auto& z : e) z /= nrm;
                u.set_column(col, e);
                return;
            }
        }
        throw Error(ErrorCode::InvalidInput, "orthonormal completion failed");
    };
    for (std::size_t col : holes) fill_one(col, dim);
    for (std::size_t col = filled; col < dim; ++col) fill_one(col, dim);
    return u;
}

struct JacobiSvd {
    std::vector<double> sigma;   // sorted nonincreasing
    std::vector<CVector> left;   // w_j / sigma_j before completion (raw columns, sorted)
    ComplexMatrix right;         // q x q, columns sorted to match sigma
};

// One-sided Jacobi for a tall (rows >= cols) matrix.
JacobiSvd one_sided_jacobi(const ComplexMatrix& m)
{
    const std::size_t p = m.rows();
    const std::size_t q = m.cols();
    ComplexMatrix w = m;
    ComplexMatrix v = ComplexMatrix::identity(q);
    constexpr double kOrthTol = 1e-15;
    for (int sweep = 0; sweep < 80; ++sweep) {
        bool rotated = false;
        for (std::size_t i = 0; i + 1 < q; ++i) {
            for (std::size_t j = i + 1; j < q; ++j) {
                double alpha = 0.0;
                double beta = 0.0;
                cplx gamma = 0.0;
                for (std::size_t k = 0; k < p; ++k) {
                    alpha += std::norm(w(k, i));
                    beta += std::norm(w(k, j));
                    gamma += std::conj(w(k, i)) * w(k, j);
                }
                const double mag = std::abs(gamma);
                if (mag == 0.0 || mag <= kOrthTol * std::sqrt(alpha * beta)) continue;
                rotated = true;
                const JacobiRotation rot = make_rotation(alpha, beta, gamma);
                rotate_columns(w, i, j, rot);
                rotate_columns(v, i, j, rot);
            }
        }
        if (!rotated) break;
    }
    std::vector<double> norms(q);
    for (std::size_t j = 0; j < q; ++j) norms[j] = norm2(w.column(j));
    const auto order = order_descending(norms);

    JacobiSvd out;
    out.right = ComplexMatrix(q, q);
    for (std::size_t r = 0; r < q; ++r) {
        const std::size_t j = order[r];
        out.sigma.push_back(norms[j]);
        out.left.push_back(w.column(j));
        out.right.set_column(r, v.column(j));
    }
    return out;
}

} // namespace

EigResult hermitian_eig(const ComplexMatrix& h)
{
    if (h.rows() != h.cols()) throw Error(ErrorCode::NotSquare, "eigendecomposition needs a square matrix");
    require_finite(h);
    const double scale = 1.0 + h.frobenius_norm();
    if ((h - h.adjoint()).frobenius_norm() > 1e-10 * scale)
        throw Error(ErrorCode::NotHermitian, "matrix is not Hermitian within tolerance");

    const std::size_t n = h.rows();
    ComplexMatrix a = (h + h.adjoint()) * cplx{0.5};
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double total = a.frobenius_norm();

    for (int sweep = 0; sweep < 100 && total > 0.0; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (std::sqrt(off) <= 1e-16 * total) break;

        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                if (std::abs(apq) <= 1e-300) continue;
                const JacobiRotation rot = make_rotation(a(p, p).real(), a(q, q).real(), apq);
                rotate_columns(a, p, q, rot);
                rotate_rows(a, p, q, rot);
                rotate_columns(v, p, q, rot);
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    const auto order = order_descending(diag);
    EigResult out;
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        out.eigenvalues.push_back(diag[order[r]]);
        out.eigenvectors.set_column(r, v.column(order[r]));
    }
    return out;
}

SVDResult svd(const ComplexMatrix& m)
{
    require_finite(m);
    const bool wide = m.rows() < m.cols();
    const ComplexMatrix tall = wide ? m.adjoint() : m;
    JacobiSvd js = one_sided_jacobi(tall);

    ComplexMatrix u_tall = orthonormal_completion(js.left, tall.rows());
    SVDResult out;
    out.singular_values = std::move(js.sigma);
    if (wide) {
        // m^H = U' S V'^H  =>  m = V' S U'^H
        out.left_vectors = std::move(js.right);
        out.right_vectors = std::move(u_tall);
    } else {
        out.left_vectors = std::move(u_tall);
        out.right_vectors = std::move(js.right);
    }
    return out;
}

std::vector<double> singular_values(const ComplexMatrix& m)
{
    require_finite(m);
    const ComplexMatrix tall = m.rows() < m.cols() ? m.adjoint() : m;
    return one_sided_jacobi(tall).sigma;
}

std::size_t rank_from_singular_values(std::span<const double> sv, std::size_t rows, std::size_t cols,
                                      const ToleranceConfig& tol)
{
    const double sigma_max = sv.empty() ? 0.0 : sv.front();
    const double thr = tol.threshold(sigma_max, rows, cols);
    return static_cast<std::size_t>(std::count_if(sv.begin(), sv.end(), [&](double s) { return s > thr; }));
}

std::size_t numerical_rank(const ComplexMatrix& m, const ToleranceConfig& tol)
{
    const auto sv = singular_values(m);
    return rank_from_singular_values(sv, m.rows(), m.cols(), tol);
}

ComplexMatrix null_space(const ComplexMatrix& m, const ToleranceConfig& tol)
{
    const SVDResult s = svd(m);
    const std::size_t rank = rank_from_singular_values(s.singular_values, m.rows(), m.cols(), tol);
    const std::size_t nullity = m.cols() - rank;
    ComplexMatrix basis(m.cols(), nullity);
    for (std::size_t j = 0; j < nullity; ++j) basis.set_column(j, s.right_vectors.column(rank + j));
    return basis;
}

} // namespace mixloci
