#pragma once

// Degeneracy loci V^k of a bipartite state: the projective points r where the
// pencil sum_i r_i A_i (equivalently the form sum_ij r_i conj(r_j) rho_ij)
// has rank <= k.
//
// V^0 is a linear condition on r and is computed exactly as a null space.
// For k >= 1 points are found by multistart Gauss-Newton descent on the
// tail energy sum_{j>k} sigma_j^2 over the unit sphere; an empty result there
// is a failure to find, not a proof of emptiness.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mixloci/numeric.hpp"
#include "mixloci/states.hpp"

namespace mixloci {

enum class PencilSource { Ensemble, Hermitian };

class Pencil {
public:
    /// All blocks must share their (nonzero) dimensions.
    Pencil(Side side, std::vector<ComplexMatrix> blocks, PencilSource source = PencilSource::Ensemble);

    Side side() const noexcept { return side_; }
    PencilSource source() const noexcept { return source_; }
    std::size_t ambient_dim() const noexcept { return blocks_.size(); }
    std::size_t block_rows() const noexcept { return blocks_.front().rows(); }
    std::size_t block_cols() const noexcept { return blocks_.front().cols(); }
    /// Largest possible rank of an evaluation, min(block_rows, block_cols).
    std::size_t max_rank() const noexcept { return std::min(block_rows(), block_cols()); }
    std::span<const ComplexMatrix> blocks() const noexcept { return blocks_; }

    /// sum_i r_i A_i. Throws DimensionMismatch.
    ComplexMatrix evaluate(std::span<const cplx> r) const;
    /// (block_rows * block_cols) x ambient matrix whose column i flattens A_i row-major.
    ComplexMatrix stacked() const;
    bool is_zero() const;

private:
    Side side_;
    PencilSource source_;
    std::vector<ComplexMatrix> blocks_;
};

/// Homogeneous coordinates in CP^{d-1}, stored canonically: unit norm and the
/// largest-modulus coordinate real positive (near-ties go to the lowest index).
class ProjectivePoint {
public:
    /// Throws ZeroVector.
    explicit ProjectivePoint(std::span<const cplx> coords);
    static ProjectivePoint basis(std::size_t dim, std::size_t index);

    std::span<const cplx> coords() const noexcept { return coords_; }
    std::size_t dim() const noexcept { return coords_.size(); }
    const cplx& operator[](std::size_t i) const { return coords_[i]; }

    /// 1 - |<p, q>| <= tol.
    bool equals(const ProjectivePoint& other, double tol = 1e-9) const;

private:
    CVector coords_;
};

struct LinearLocus {
    ComplexMatrix basis;  // ambient x (dimension + 1), orthonormal columns
    int projective_dimension = -1;

    bool empty() const noexcept { return projective_dimension < 0; }
    std::vector<ProjectivePoint> basis_points() const;
};

struct SamplerConfig {
    std::size_t starts = 64;
    std::uint64_t seed = 0;
    std::size_t max_iter = 500;
    std::size_t max_clusters = 8;
};

struct LocusPoint {
    ProjectivePoint point;
    double residual = 0.0;   // sigma_{k+1} of the evaluated pencil
    double threshold = 0.0;  // membership threshold of that evaluation
};

struct LocusSample {
    std::size_t k = 0;
    bool trivial = false;        // k >= max rank: every point qualifies
    std::vector<LocusPoint> points;  // deduplicated, in start order
    std::size_t starts = 0;
    std::size_t converged = 0;   // starts that ended inside the locus
    double min_residual = 0.0;   // smallest sigma_{k+1} over all local minima
    double min_residual_threshold = 0.0;
    /// Converged starts collapsed onto at most max_clusters points.
    bool clustered = false;
};

struct ResidualInfo {
    double residual = 0.0;
    double threshold = 0.0;
    std::size_t rank = 0;
};

Pencil pencil_from_ensemble(const Ensemble& e, Side side);
/// Pencil of the spectral ensemble of rho.
Pencil pencil_from_density(const DensityMatrix& rho, Side side, const ToleranceConfig& tol = {});

/// sum_ij r_i conj(r_j) rho_ij (side A, n x n); the analogue over B blocks for side B.
ComplexMatrix hermitian_form(const DensityMatrix& rho, const ProjectivePoint& point, Side side);

std::size_t rank_at(const Pencil& p, const ProjectivePoint& point, const ToleranceConfig& tol = {});
bool in_locus(const Pencil& p, std::size_t k, const ProjectivePoint& point, const ToleranceConfig& tol = {});
/// sigma_{k+1} at the point together with the membership threshold.
ResidualInfo residual_at(const Pencil& p, std::size_t k, const ProjectivePoint& point,
                         const ToleranceConfig& tol = {});

LinearLocus locus_zero(const Pencil& p, const ToleranceConfig& tol = {});

/// k >= max_rank gives a trivial sample. Throws InvalidK when k > block_rows.
LocusSample sample_locus(const Pencil& p, std::size_t k, const SamplerConfig& config = {},
                         const ToleranceConfig& tol = {});

/// Projective dimension of the tangent space of V^k at the point, from the rank
/// of the first-order variation of the (k+1)-minors. Throws NotOnLocus.
std::size_t local_dimension(const Pencil& p, std::size_t k, const ProjectivePoint& point,
                            const ToleranceConfig& tol = {});

enum class EmptinessKind { EmptyExact, NonemptyWitness, EmptyHeuristic };

struct EmptinessVerdict {
    EmptinessKind kind = EmptinessKind::EmptyExact;
    std::optional<ProjectivePoint> witness;
    double min_residual = 0.0;  // EmptyHeuristic: smallest sigma_{k+1} seen
    double min_residual_threshold = 0.0;
};

EmptinessVerdict is_locus_empty(const Pencil& p, std::size_t k, const SamplerConfig& config = {},
                                const ToleranceConfig& tol = {});

} // namespace mixloci
