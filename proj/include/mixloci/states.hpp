#pragma once

// Bipartite state model on H_A^m ⊗ H_B^n. Every vector and matrix uses the
// basis order |11>, ..., |1n>, ..., |m1>, ..., |mn>, i.e. |ij> sits at index
// (i-1)*n + (j-1) for one-based i, j.

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "mixloci/numeric.hpp"

namespace mixloci {

struct BipartiteShape {
    std::size_t m = 1;
    std::size_t n = 1;

    std::size_t dim() const noexcept { return m * n; }
    friend bool operator==(const BipartiteShape&, const BipartiteShape&) = default;
};

enum class Side { A, B };

/// Dimension of the projective space the side's locus lives in (m for A, n for B).
inline std::size_t ambient_dim(BipartiteShape shape, Side side) { return side == Side::A ? shape.m : shape.n; }
/// Dimension of the other factor (n for A, m for B).
inline std::size_t fiber_dim(BipartiteShape shape, Side side) { return side == Side::A ? shape.n : shape.m; }

class PureState {
public:
    BipartiteShape shape() const noexcept { return shape_; }
    std::span<const cplx> amplitudes() const noexcept { return amps_; }
    cplx amplitude(std::size_t i, std::size_t j) const { return amps_[i * shape_.n + j]; }

    /// m x n matrix (a_ij).
    ComplexMatrix coefficient_matrix() const;
    ComplexMatrix projector() const;

private:
    friend PureState make_pure(std::span<const cplx>, BipartiteShape);
    PureState(BipartiteShape shape, CVector amps) : shape_(shape), amps_(std::move(amps)) {}

    BipartiteShape shape_;
    CVector amps_;
};

/// Normalized copy of raw amplitudes. Throws ShapeMismatch or ZeroVector.
PureState make_pure(std::span<const cplx> raw_amplitudes, BipartiteShape shape);

struct SchmidtDecomposition {
    std::vector<double> coefficients;  // a_1 >= ... >= a_d > threshold
    std::size_t rank = 0;
    ComplexMatrix left_basis;   // m x d
    ComplexMatrix right_basis;  // n x d
};

SchmidtDecomposition schmidt(const PureState& psi, const ToleranceConfig& tol = {});

struct EnsembleMember {
    double weight = 0.0;
    PureState state;
};

/// Weighted pure states with positive weights summing to one.
class Ensemble {
public:
    /// Weights must be positive; they are rescaled to unit sum when needed and
    /// normalized() then reports true.
    static Ensemble make(BipartiteShape shape, std::vector<EnsembleMember> members);
    /// Convenience: raw (possibly unnormalized) vectors with positive weights.
    static Ensemble from_vectors(BipartiteShape shape, std::span<const double> weights,
                                 std::span<const CVector> vectors);

    BipartiteShape shape() const noexcept { return shape_; }
    std::span<const EnsembleMember> members() const noexcept { return members_; }
    std::size_t size() const noexcept { return members_.size(); }
    bool normalized() const noexcept { return normalized_; }

    /// mn x t matrix whose column l is the amplitude vector of member l.
    ComplexMatrix amplitude_matrix() const;
    std::vector<double> weights() const;

private:
    Ensemble(BipartiteShape shape, std::vector<EnsembleMember> members, bool normalized)
        : shape_(shape), members_(std::move(members)), normalized_(normalized) {}

    BipartiteShape shape_;
    std::vector<EnsembleMember> members_;
    bool normalized_ = false;
};

/// Hermitian, positive semidefinite, unit-trace mn x mn operator.
class DensityMatrix {
public:
    /// Validates the density invariants (Hermitian and unit trace within 1e-10,
    /// eigenvalues >= -1e-10). Small negative eigenvalues are clamped to zero.
    /// With rescale_trace the matrix is first divided by its (positive) trace.
    static DensityMatrix from_matrix(BipartiteShape shape, const ComplexMatrix& matrix, bool rescale_trace = false);

    BipartiteShape shape() const noexcept { return shape_; }
    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    /// n x n block rho_ij (zero-based block indices).
    ComplexMatrix block(std::size_t i, std::size_t j) const;

private:
    friend DensityMatrix density_from_ensemble(const Ensemble&);
    DensityMatrix(BipartiteShape shape, ComplexMatrix matrix) : shape_(shape), matrix_(std::move(matrix)) {}

    BipartiteShape shape_;
    ComplexMatrix matrix_;
};

/// A P A^H for the ensemble's amplitude matrix A and weight diagonal P.
DensityMatrix density_from_ensemble(const Ensemble& e);

/// Spectral decomposition as an ensemble (eigenvalues above the rank threshold).
Ensemble eigen_ensemble(const DensityMatrix& rho, const ToleranceConfig& tol = {});

/// Eigenvalues of rho, nonincreasing.
std::vector<double> spectrum(const DensityMatrix& rho);

std::size_t rank(const DensityMatrix& rho, const ToleranceConfig& tol = {});

DensityMatrix mix(std::span<const double> weights, std::span<const DensityMatrix> states);

/// Side::A returns tr_A(rho) (n x n); Side::B returns tr_B(rho) (m x m).
ComplexMatrix partial_trace(const DensityMatrix& rho, Side traced_out);

/// (U ⊗ V) rho (U ⊗ V)^H.
DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& u, const ComplexMatrix& v);

// Random states. Generators are caller-owned; the seed overloads build a
// std::mt19937_64 from the seed.

PureState random_pure(BipartiteShape shape, std::mt19937_64& rng);
PureState random_pure(BipartiteShape shape, std::uint64_t seed);

/// Rank-r ensemble: orthonormalized complex Gaussian vectors, flat simplex weights.
Ensemble random_ensemble(BipartiteShape shape, std::size_t r, std::mt19937_64& rng,
                         const ToleranceConfig& tol = {});
DensityMatrix random_density(BipartiteShape shape, std::size_t r, std::mt19937_64& rng,
                             const ToleranceConfig& tol = {});
DensityMatrix random_density(BipartiteShape shape, std::size_t r, std::uint64_t seed,
                             const ToleranceConfig& tol = {});

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng);

/// Unit vector of independent standard complex Gaussians.
CVector random_unit_vector(std::size_t n, std::mt19937_64& rng);

/// Stateless seed derivation: distinct streams for (seed, index) pairs.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

} // namespace mixloci
