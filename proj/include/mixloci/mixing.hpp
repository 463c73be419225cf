#pragma once

// Necessary conditions on decompositions rho = sum_i p_i rho_i:
//  - eigenvalue majorization (pure and mixed components, and reduced states),
//  - containment of degeneracy loci V^k(rho) ⊂ V^k(rho_i), which yields
//    infeasibility certificates for a proposed component,
//  - Schmidt-rank caps derived from the exact V^0 on both sides,
//  - the genericity predicate for empty loci and its Monte-Carlo check.
//
// None of these checks proves that a decomposition exists.

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "mixloci/loci.hpp"
#include "mixloci/states.hpp"

namespace mixloci {

/// r ≺ s on nonincreasing rearrangements; the shorter vector is padded with zeros.
bool majorizes(std::span<const double> r, std::span<const double> s, double tol = 1e-9);

/// Pure-state decomposition with probabilities `probs` exists iff probs ≺ λ(rho).
/// Throws WeightSumInvalid when probs are not a probability vector.
bool check_pure_mix_eigen(const DensityMatrix& rho, std::span<const double> probs);

struct WeightedState {
    double weight = 0.0;
    DensityMatrix state;
};

/// λ(rho) ≺ sum_j p_j λ(rho_j).
bool check_mixed_mix_eigen(const DensityMatrix& rho, std::span<const WeightedState> components);

/// The same constraint applied to tr_A and tr_B of every state; true iff both hold.
bool check_reduced_constraints(const DensityMatrix& rho, std::span<const WeightedState> components);

struct MixCertificate {
    ProjectivePoint witness;
    Side side = Side::A;
    std::size_t k = 0;
    std::size_t rank_in_target = 0;
    std::size_t rank_in_component = 0;
    double target_residual = 0.0;
    double target_threshold = 0.0;
    double component_residual = 0.0;
    double component_threshold = 0.0;
};

struct SearchStats {
    std::vector<std::size_t> ranks_scanned;
    std::size_t candidates_examined = 0;
    /// Rank bounds at which the target's locus was found empty (so no witness can exist there).
    std::vector<std::size_t> empty_target_loci;
};

struct Infeasible {
    MixCertificate certificate;
};

struct NoObstructionFound {
    SearchStats stats;
};

using ComponentVerdict = std::variant<Infeasible, NoObstructionFound>;

/// Searches for a point of V^k(target) outside V^k(component). A hit certifies
/// that the component cannot appear with positive weight in any mixture equal
/// to the target. With k unset, k runs from 0 to min(fiber dim, rank target) - 1
/// and stops at the first certificate.
/// Throws ShapeMismatch, or InvalidK when k >= fiber dimension of the side.
ComponentVerdict check_component_necessary(const DensityMatrix& target, const DensityMatrix& component, Side side,
                                           std::optional<std::size_t> k, const SamplerConfig& config = {},
                                           const ToleranceConfig& tol = {});

/// Re-derives both pencils from fresh spectral ensembles and re-checks the guard bands.
bool verify_certificate(const DensityMatrix& target, const DensityMatrix& component, const MixCertificate& cert,
                        const ToleranceConfig& tol = {});

struct SchmidtRankCaps {
    int dim_a = -1;  // projective dimension of V_A^0
    int dim_b = -1;
    std::size_t cap_a = 0;  // m - 1 - dim_a
    std::size_t cap_b = 0;  // n - 1 - dim_b
    std::size_t combined = 0;
};

SchmidtRankCaps schmidt_rank_caps(const DensityMatrix& rho, const ToleranceConfig& tol = {});

/// Upper bound on the Schmidt rank of every pure state in every decomposition of rho.
std::size_t schmidt_rank_cap(const DensityMatrix& rho, const ToleranceConfig& tol = {});

/// Every decomposition of rho uses product states only.
bool forces_separable(const DensityMatrix& rho, const ToleranceConfig& tol = {});

/// No decomposition of rho uses a state of Schmidt rank min(m, n).
bool excludes_max_schmidt_rank(const DensityMatrix& rho, const ToleranceConfig& tol = {});

/// Some member has Schmidt rank >= the caller-supplied Schmidt-number lower bound.
bool check_ensemble_schmidt(std::size_t schmidt_number_lower_bound, const Ensemble& e,
                            const ToleranceConfig& tol = {});

struct GenericityQuery {
    std::size_t m = 1;
    std::size_t n = 1;
    std::size_t r = 1;  // rank of the candidate component
    std::size_t t = 0;  // locus rank bound
    std::size_t trials = 0;
    std::uint64_t seed = 0;
};

/// Codimension of rank <= t inside the n x r evaluations, (n - t)(r - t).
std::size_t genericity_codimension(const GenericityQuery& q);

/// True when V_A^t of a generic rank-r state is empty: (n - t)(r - t) >= m.
/// False when t >= min(n, r) (the locus is the whole space).
/// Throws ParameterOutOfRange for an invalid shape or r outside [1, mn].
bool generic_empty_predicate(const GenericityQuery& q);

struct TrialRecord {
    EmptinessKind kind = EmptinessKind::EmptyHeuristic;
    std::optional<ProjectivePoint> witness;
    double min_residual = 0.0;
    double threshold = 0.0;
};

struct ResidualSummary {
    double min = 0.0;
    double median = 0.0;
    double max = 0.0;
    /// Smallest residual / threshold ratio among trials without a witness.
    std::optional<double> min_margin;
};

struct GenericityReport {
    bool predicate_holds = false;
    std::size_t codimension = 0;
    std::size_t trials = 0;
    std::size_t nonempty_count = 0;
    std::optional<double> nonempty_fraction;  // unset when trials == 0
    std::optional<ResidualSummary> residuals;  // over trials without a witness
    std::vector<TrialRecord> records;
};

/// Draws q.trials random rank-r states and decides V_A^t on each. Per-trial
/// seeds come from (q.seed, trial index).
GenericityReport monte_carlo_genericity(const GenericityQuery& q, const SamplerConfig& config = {},
                                        const ToleranceConfig& tol = {});

} // namespace mixloci
