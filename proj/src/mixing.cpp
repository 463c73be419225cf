#include "mixloci/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace mixloci {

namespace {

constexpr double kWeightSumTol = 1e-10;
constexpr double kGuardBand = 10.0;

void require_probabilities(std::span<const double> w)
{
    if (w.empty()) throw Error(ErrorCode::WeightSumInvalid, "empty probability vector");
    double total = 0.0;
    for (double x : w) {
        if (!(x > 0.0) || !std::isfinite(x)) throw Error(ErrorCode::WeightSumInvalid, "weights must be positive");
        total += x;
    }
    if (std::abs(total - 1.0) > kWeightSumTol)
        throw Error(ErrorCode::WeightSumInvalid, "weights sum to " + std::to_string(total));
}

std::vector<double> sorted_desc(std::span<const double> v)
{
    std::vector<double> out(v.begin(), v.end());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

std::vector<double> weighted_spectrum_sum(std::span<const double> weights, std::span<const std::vector<double>> spectra)
{
    std::size_t len = 0;
    for (const auto& s : spectra) len = std::max(len, s.size());
    std::vector<double> total(len, 0.0);
    for (std::size_t j = 0; j < spectra.size(); ++j) {
        const auto s = sorted_desc(spectra[j]);
        for (std::size_t i = 0; i < s.size(); ++i) total[i] += weights[j] * s[i];
    }
    return total;
}

void require_components(const DensityMatrix& rho, std::span<const WeightedState> components)
{
    if (components.empty()) throw Error(ErrorCode::WeightSumInvalid, "no components given");
    std::vector<double> w;
    for (const auto& c : components) {
        if (c.state.shape() != rho.shape()) throw Error(ErrorCode::ShapeMismatch, "component shape differs from target");
        w.push_back(c.weight);
    }
    require_probabilities(w);
}

bool majorized_by_mixture(const std::vector<double>& target, std::span<const WeightedState> components,
                          const std::function<std::vector<double>(const DensityMatrix&)>& spectrum_of)
{
    std::vector<double> weights;
    std::vector<std::vector<double>> spectra;
    for (const auto& c : components) {
        weights.push_back(c.weight);
        spectra.push_back(spectrum_of(c.state));
    }
    return majorizes(target, weighted_spectrum_sum(weights, spectra));
}

std::vector<double> reduced_spectrum(const DensityMatrix& rho, Side traced_out)
{
    return hermitian_eig(partial_trace(rho, traced_out)).eigenvalues;
}

// Lexicographic order on coordinate moduli with a tolerance; prefers witnesses
// with leading zero coordinates and makes the pick independent of search order.
int compare_moduli(const ProjectivePoint& a, const ProjectivePoint& b)
{
    for (std::size_t i = 0; i < a.dim(); ++i) {
        const double x = std::abs(a[i]);
        const double y = std::abs(b[i]);
        if (x < y - 1e-9) return -1;
        if (x > y + 1e-9) return 1;
    }
    return 0;
}

bool preferred(const MixCertificate& a, const MixCertificate& b)
{
    const int c = compare_moduli(a.witness, b.witness);
    if (c != 0) return c < 0;
    return a.component_residual / a.component_threshold > b.component_residual / b.component_threshold;
}

std::optional<MixCertificate> try_certificate(const Pencil& target, const Pencil& component, Side side, std::size_t k,
                                              const ProjectivePoint& pt, const ToleranceConfig& tol)
{
    const ResidualInfo t = residual_at(target, k, pt, tol);
    if (t.residual > t.threshold / kGuardBand) return std::nullopt;
    const ResidualInfo c = residual_at(component, k, pt, tol);
    if (c.residual < kGuardBand * c.threshold) return std::nullopt;
    return MixCertificate{pt, side, k, t.rank, c.rank, t.residual, t.threshold, c.residual, c.threshold};
}

std::vector<ProjectivePoint> random_points(std::size_t dim, std::size_t count, std::uint64_t seed)
{
    std::vector<ProjectivePoint> pts;
    for (std::size_t i = 0; i < dim; ++i) pts.push_back(ProjectivePoint::basis(dim, i));
    for (std::size_t s = 0; s < count; ++s) {
        std::mt19937_64 rng(derive_seed(seed, s));
        pts.emplace_back(random_unit_vector(dim, rng));
    }
    return pts;
}

// Points of V^k(target) worth testing against the component. Empty when the
// target's locus is empty (exactly for k = 0) or nothing was found.
std::vector<ProjectivePoint> target_candidates(const Pencil& target, const Pencil& component, std::size_t k,
                                               const SamplerConfig& config, const ToleranceConfig& tol)
{
    std::vector<ProjectivePoint> pts;
    const LinearLocus zero = locus_zero(target, tol);
    if (!zero.empty()) {
        pts = zero.basis_points();
        // Direction of the exact locus that the component's linear condition violates most.
        const ComplexMatrix restricted = component.stacked() * zero.basis;
        const SVDResult s = svd(restricted);
        if (s.sigma_max() > 0.0) pts.emplace_back(zero.basis * std::span<const cplx>(s.right_vectors.column(0)));
    }
    if (k == 0) return pts;

    if (k >= target.max_rank() || target.is_zero()) {
        auto extra = random_points(target.ambient_dim(), config.starts, config.seed);
        pts.insert(pts.end(), extra.begin(), extra.end());
        return pts;
    }
    const LocusSample sample = sample_locus(target, k, config, tol);
    for (const auto& lp : sample.points) pts.push_back(lp.point);
    return pts;
}

} // namespace

bool majorizes(std::span<const double> r, std::span<const double> s, double tol)
{
    const std::size_t len = std::max(r.size(), s.size());
    std::vector<double> a = sorted_desc(r);
    std::vector<double> b = sorted_desc(s);
    a.resize(len, 0.0);
    b.resize(len, 0.0);
    // Zero padding may break the ordering when entries are negative.
    std::sort(a.begin(), a.end(), std::greater<>());
    std::sort(b.begin(), b.end(), std::greater<>());
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
        sa += a[i];
        sb += b[i];
        if (i + 1 < len && sa > sb + tol) return false;
    }
    return std::abs(sa - sb) <= tol;
}

bool check_pure_mix_eigen(const DensityMatrix& rho, std::span<const double> probs)
{
    require_probabilities(probs);
    return majorizes(probs, spectrum(rho));
}

bool check_mixed_mix_eigen(const DensityMatrix& rho, std::span<const WeightedState> components)
{
    require_components(rho, components);
    return majorized_by_mixture(spectrum(rho), components, [](const DensityMatrix& d) { return spectrum(d); });
}

bool check_reduced_constraints(const DensityMatrix& rho, std::span<const WeightedState> components)
{
    require_components(rho, components);
    for (Side traced : {Side::A, Side::B}) {
        const bool ok = majorized_by_mixture(reduced_spectrum(rho, traced), components,
                                             [traced](const DensityMatrix& d) { return reduced_spectrum(d, traced); });
        if (!ok) return false;
    }
    return true;
}

ComponentVerdict check_component_necessary(const DensityMatrix& target, const DensityMatrix& component, Side side,
                                           std::optional<std::size_t> k, const SamplerConfig& config,
                                           const ToleranceConfig& tol)
{
    if (target.shape() != component.shape()) throw Error(ErrorCode::ShapeMismatch, "target and component shapes differ");
    const std::size_t fiber = fiber_dim(target.shape(), side);
    if (k && *k >= fiber)
        throw Error(ErrorCode::InvalidK, "rank bound " + std::to_string(*k) + " must be below " + std::to_string(fiber));

    const Pencil target_pencil = pencil_from_density(target, side, tol);
    const Pencil component_pencil = pencil_from_density(component, side, tol);

    std::vector<std::size_t> ks;
    if (k) {
        ks.push_back(*k);
    } else {
        for (std::size_t j = 0; j < std::min(fiber, target_pencil.block_cols()); ++j) ks.push_back(j);
    }

    SearchStats stats;
    for (std::size_t kk : ks) {
        stats.ranks_scanned.push_back(kk);
        const auto candidates = target_candidates(target_pencil, component_pencil, kk, config, tol);
        if (candidates.empty()) stats.empty_target_loci.push_back(kk);
        std::optional<MixCertificate> best;
        for (const auto& pt : candidates) {
            ++stats.candidates_examined;
            auto cert = try_certificate(target_pencil, component_pencil, side, kk, pt, tol);
            if (cert && (!best || preferred(*cert, *best))) best = std::move(cert);
        }
        if (best) return Infeasible{std::move(*best)};
    }
    return NoObstructionFound{std::move(stats)};
}

bool verify_certificate(const DensityMatrix& target, const DensityMatrix& component, const MixCertificate& cert,
                        const ToleranceConfig& tol)
{
    if (target.shape() != component.shape()) return false;
    const Pencil tp = pencil_from_density(target, cert.side, tol);
    const Pencil cp = pencil_from_density(component, cert.side, tol);
    if (cert.witness.dim() != tp.ambient_dim()) return false;
    const auto fresh = try_certificate(tp, cp, cert.side, cert.k, cert.witness, tol);
    return fresh && fresh->rank_in_target <= cert.k && fresh->rank_in_component > cert.k;
}

SchmidtRankCaps schmidt_rank_caps(const DensityMatrix& rho, const ToleranceConfig& tol)
{
    const auto [m, n] = rho.shape();
    SchmidtRankCaps caps;
    caps.dim_a = locus_zero(pencil_from_density(rho, Side::A, tol), tol).projective_dimension;
    caps.dim_b = locus_zero(pencil_from_density(rho, Side::B, tol), tol).projective_dimension;
    caps.cap_a = static_cast<std::size_t>(static_cast<int>(m) - 1 - caps.dim_a);
    caps.cap_b = static_cast<std::size_t>(static_cast<int>(n) - 1 - caps.dim_b);
    caps.combined = std::min(caps.cap_a, caps.cap_b);
    return caps;
}

std::size_t schmidt_rank_cap(const DensityMatrix& rho, const ToleranceConfig& tol)
{
    return schmidt_rank_caps(rho, tol).combined;
}

bool forces_separable(const DensityMatrix& rho, const ToleranceConfig& tol)
{
    const auto caps = schmidt_rank_caps(rho, tol);
    const auto [m, n] = rho.shape();
    return caps.dim_a == static_cast<int>(m) - 2 || caps.dim_b == static_cast<int>(n) - 2;
}

bool excludes_max_schmidt_rank(const DensityMatrix& rho, const ToleranceConfig& tol)
{
    const auto [m, n] = rho.shape();
    return schmidt_rank_cap(rho, tol) < std::min(m, n);
}

bool check_ensemble_schmidt(std::size_t schmidt_number_lower_bound, const Ensemble& e, const ToleranceConfig& tol)
{
    std::size_t best = 0;
    for (const auto& mem : e.members()) best = std::max(best, schmidt(mem.state, tol).rank);
    return best >= schmidt_number_lower_bound;
}

namespace {

void require_query(const GenericityQuery& q)
{
    if (q.m < 1 || q.n < 1) throw Error(ErrorCode::ParameterOutOfRange, "m and n must be >= 1");
    if (q.r < 1 || q.r > q.m * q.n)
        throw Error(ErrorCode::ParameterOutOfRange, "r must lie in [1, m*n]");
}

} // namespace

std::size_t genericity_codimension(const GenericityQuery& q)
{
    require_query(q);
    if (q.t >= std::min(q.n, q.r)) return 0;
    return (q.n - q.t) * (q.r - q.t);
}

bool generic_empty_predicate(const GenericityQuery& q)
{
    require_query(q);
    if (q.t >= std::min(q.n, q.r)) return false;
    return genericity_codimension(q) >= q.m;
}

GenericityReport monte_carlo_genericity(const GenericityQuery& q, const SamplerConfig& config, const ToleranceConfig& tol)
{
    GenericityReport report;
    report.predicate_holds = generic_empty_predicate(q);
    report.codimension = genericity_codimension(q);
    report.trials = q.trials;
    if (q.trials == 0) return report;

    const BipartiteShape shape{q.m, q.n};
    for (std::size_t i = 0; i < q.trials; ++i) {
        const std::uint64_t trial_seed = derive_seed(q.seed, i);
        TrialRecord rec;
        if (q.t >= q.n) {
            // Rank bound at or above the fiber dimension: V^t is all of CP^{m-1}.
            rec.kind = EmptinessKind::NonemptyWitness;
            rec.witness = ProjectivePoint::basis(q.m, 0);
        } else {
            const DensityMatrix rho = random_density(shape, q.r, trial_seed, tol);
            SamplerConfig trial_config = config;
            trial_config.seed = trial_seed;
            const EmptinessVerdict v = is_locus_empty(pencil_from_density(rho, Side::A, tol), q.t, trial_config, tol);
            rec.kind = v.kind;
            rec.witness = v.witness;
            rec.min_residual = v.min_residual;
            rec.threshold = v.min_residual_threshold;
        }
        if (rec.kind == EmptinessKind::NonemptyWitness) ++report.nonempty_count;
        report.records.push_back(std::move(rec));
    }
    report.nonempty_fraction = static_cast<double>(report.nonempty_count) / static_cast<double>(q.trials);

    std::vector<double> residuals;
    std::optional<double> margin;
    for (const auto& rec : report.records) {
        if (rec.kind == EmptinessKind::NonemptyWitness) continue;
        residuals.push_back(rec.min_residual);
        if (rec.kind == EmptinessKind::EmptyHeuristic && rec.threshold > 0.0) {
            const double ratio = rec.min_residual / rec.threshold;
            margin = margin ? std::min(*margin, ratio) : ratio;
        }
    }
    if (!residuals.empty()) {
        std::sort(residuals.begin(), residuals.end());
        const std::size_t mid = residuals.size() / 2;
        const double median = residuals.size() % 2 ? residuals[mid] : 0.5 * (residuals[mid - 1] + residuals[mid]);
        report.residuals = ResidualSummary{residuals.front(), median, residuals.back(), margin};
    }
    return report;
}

} // namespace mixloci
