#include "mixloci/loci.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace mixloci {

// ---------------------------------------------------------------------------
// Pencil

Pencil::Pencil(Side side, std::vector<ComplexMatrix> blocks, PencilSource source)
    : side_(side), source_(source), blocks_(std::move(blocks))
{
    if (blocks_.empty()) throw Error(ErrorCode::InvalidInput, "pencil needs at least one block");
    const auto rows = blocks_.front().rows();
    const auto cols = blocks_.front().cols();
    if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidInput, "pencil blocks must be nonempty");
    for (const auto& b : blocks_) {
        if (b.rows() != rows || b.cols() != cols)
            throw Error(ErrorCode::DimensionMismatch, "pencil blocks differ in shape");
    }
}

ComplexMatrix Pencil::evaluate(std::span<const cplx> r) const
{
    if (r.size() != blocks_.size())
        throw Error(ErrorCode::DimensionMismatch, "point has " + std::to_string(r.size()) +
                                                      " coordinates, pencil expects " +
                                                      std::to_string(blocks_.size()));
    ComplexMatrix out(block_rows(), block_cols());
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        if (r[i] == cplx{}) continue;
        const auto src = blocks_[i].entries();
        auto dst = out.entries();
        for (std::size_t e = 0; e < dst.size(); ++e) dst[e] += r[i] * src[e];
    }
    return out;
}

ComplexMatrix Pencil::stacked() const
{
    const std::size_t len = block_rows() * block_cols();
    ComplexMatrix n(len, blocks_.size());
    for (std::size_t i = 0; i < blocks_.size(); ++i) n.set_column(i, blocks_[i].entries());
    return n;
}

bool Pencil::is_zero() const
{
    return std::all_of(blocks_.begin(), blocks_.end(), [](const ComplexMatrix& b) {
        const auto e = b.entries();
        return std::all_of(e.begin(), e.end(), [](const cplx& z) { return z == cplx{}; });
    });
}

// ---------------------------------------------------------------------------
// ProjectivePoint

ProjectivePoint::ProjectivePoint(std::span<const cplx> coords) : coords_(coords.begin(), coords.end())
{
    const double nrm = norm2(coords_);
    if (!(nrm > 0.0) || !std::isfinite(nrm)) throw Error(ErrorCode::ZeroVector, "projective point needs a nonzero finite vector");
    for (auto& z : coords_) z /= nrm;

    std::size_t lead = 0;
    double best = std::abs(coords_[0]);
    for (std::size_t i = 1; i < coords_.size(); ++i) {
        const double a = std::abs(coords_[i]);
        if (a > best * (1.0 + 1e-12) + 1e-15) {
            best = a;
            lead = i;
        }
    }
    const cplx phase = std::conj(coords_[lead]) / std::abs(coords_[lead]);
    for (auto& z : coords_) z *= phase;
    coords_[lead] = std::abs(coords_[lead]);
}

ProjectivePoint ProjectivePoint::basis(std::size_t dim, std::size_t index)
{
    CVector e(dim, 0.0);
    e.at(index) = 1.0;
    return ProjectivePoint(e);
}

bool ProjectivePoint::equals(const ProjectivePoint& other, double tol) const
{
    if (other.dim() != dim()) return false;
    return 1.0 - std::abs(inner(coords_, other.coords_)) <= tol;
}

std::vector<ProjectivePoint> LinearLocus::basis_points() const
{
    std::vector<ProjectivePoint> pts;
    for (std::size_t j = 0; j < basis.cols(); ++j) pts.emplace_back(basis.column(j));
    return pts;
}

// ---------------------------------------------------------------------------
// Construction

Pencil pencil_from_ensemble(const Ensemble& e, Side side)
{
    const auto [m, n] = e.shape();
    const std::size_t t = e.size();
    const std::size_t ambient = side == Side::A ? m : n;
    const std::size_t rows = side == Side::A ? n : m;
    std::vector<ComplexMatrix> blocks(ambient, ComplexMatrix(rows, t));
    for (std::size_t l = 0; l < t; ++l) {
        const PureState& psi = e.members()[l].state;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (side == Side::A)
                    blocks[i](j, l) = psi.amplitude(i, j);
                else
                    blocks[j](i, l) = psi.amplitude(i, j);
            }
        }
    }
    return Pencil(side, std::move(blocks), PencilSource::Ensemble);
}

Pencil pencil_from_density(const DensityMatrix& rho, Side side, const ToleranceConfig& tol)
{
    const Pencil p = pencil_from_ensemble(eigen_ensemble(rho, tol), side);
    return Pencil(side, std::vector<ComplexMatrix>(p.blocks().begin(), p.blocks().end()), PencilSource::Hermitian);
}

ComplexMatrix hermitian_form(const DensityMatrix& rho, const ProjectivePoint& point, Side side)
{
    const auto [m, n] = rho.shape();
    const std::size_t ambient = side == Side::A ? m : n;
    if (point.dim() != ambient)
        throw Error(ErrorCode::DimensionMismatch, "point dimension " + std::to_string(point.dim()) +
                                                      " does not match side dimension " + std::to_string(ambient));
    const auto r = point.coords();
    const ComplexMatrix& mat = rho.matrix();
    if (side == Side::A) {
        ComplexMatrix out(n, n);
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t ip = 0; ip < m; ++ip) {
                const cplx w = r[i] * std::conj(r[ip]);
                if (w == cplx{}) continue;
                for (std::size_t j = 0; j < n; ++j)
                    for (std::size_t jp = 0; jp < n; ++jp) out(j, jp) += w * mat(i * n + j, ip * n + jp);
            }
        }
        return out;
    }
    ComplexMatrix out(m, m);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t jp = 0; jp < n; ++jp) {
            const cplx w = r[j] * std::conj(r[jp]);
            if (w == cplx{}) continue;
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t ip = 0; ip < m; ++ip) out(i, ip) += w * mat(i * n + j, ip * n + jp);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Membership

ResidualInfo residual_at(const Pencil& p, std::size_t k, const ProjectivePoint& point, const ToleranceConfig& tol)
{
    const ComplexMatrix value = p.evaluate(point.coords());
    const auto sv = singular_values(value);
    ResidualInfo info;
    info.threshold = tol.threshold(sv.empty() ? 0.0 : sv.front(), value.rows(), value.cols());
    info.residual = k < sv.size() ? sv[k] : 0.0;
    info.rank = rank_from_singular_values(sv, value.rows(), value.cols(), tol);
    return info;
}

std::size_t rank_at(const Pencil& p, const ProjectivePoint& point, const ToleranceConfig& tol)
{
    return numerical_rank(p.evaluate(point.coords()), tol);
}

bool in_locus(const Pencil& p, std::size_t k, const ProjectivePoint& point, const ToleranceConfig& tol)
{
    return rank_at(p, point, tol) <= k;
}

LinearLocus locus_zero(const Pencil& p, const ToleranceConfig& tol)
{
    LinearLocus locus;
    locus.basis = null_space(p.stacked(), tol);
    locus.projective_dimension = static_cast<int>(locus.basis.cols()) - 1;
    return locus;
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

void require_k(const Pencil& p, std::size_t k)
{
    if (k > p.block_rows())
        throw Error(ErrorCode::InvalidK, "rank bound " + std::to_string(k) + " exceeds " +
                                             std::to_string(p.block_rows()));
}

bool locus_is_trivial(const Pencil& p, std::size_t k) { return k >= p.max_rank() || p.is_zero(); }

struct TailModel {
    CVector r;
    SVDResult factors;
    double energy = 0.0;    // sum_{j>=k} sigma_j^2 (zero-based)
    double residual = 0.0;  // sigma_k (zero-based), i.e. sigma_{k+1}
    double threshold = 0.0;
};

TailModel tail_model(const Pencil& p, CVector r, std::size_t k, const ToleranceConfig& tol)
{
    TailModel t;
    t.r = std::move(r);
    const ComplexMatrix value = p.evaluate(t.r);
    t.factors = svd(value);
    const auto& sv = t.factors.singular_values;
    for (std::size_t j = k; j < sv.size(); ++j) t.energy += sv[j] * sv[j];
    t.residual = k < sv.size() ? sv[k] : 0.0;
    t.threshold = tol.threshold(t.factors.sigma_max(), value.rows(), value.cols());
    return t;
}

double tail_energy(const Pencil& p, std::span<const cplx> r, std::size_t k)
{
    const auto sv = singular_values(p.evaluate(r));
    double e = 0.0;
    for (std::size_t j = k; j < sv.size(); ++j) e += sv[j] * sv[j];
    return e;
}

// Linearization of the trailing block U_perp^H M(r + d) V_perp in d:
// column i of `jac` is vec(U_perp^H A_i V_perp), `rhs` is vec(U_perp^H M(r) V_perp).
struct TailLinearization {
    ComplexMatrix jac;
    CVector rhs;
};

TailLinearization linearize_tail(const Pencil& p, const TailModel& t, std::size_t k)
{
    const std::size_t rows = p.block_rows();
    const std::size_t cols = p.block_cols();
    const std::size_t tr = rows - k;
    const std::size_t tc = cols - k;
    const ComplexMatrix& u = t.factors.left_vectors;
    const ComplexMatrix& v = t.factors.right_vectors;

    auto project = [&](const ComplexMatrix& a) {
        // (U_perp^H a V_perp), flattened row-major
        ComplexMatrix av(rows, tc);
        for (std::size_t x = 0; x < rows; ++x)
            for (std::size_t b = 0; b < tc; ++b) {
                cplx s = 0.0;
                for (std::size_t y = 0; y < cols; ++y) s += a(x, y) * v(y, k + b);
                av(x, b) = s;
            }
        CVector out(tr * tc);
        for (std::size_t a_ = 0; a_ < tr; ++a_)
            for (std::size_t b = 0; b < tc; ++b) {
                cplx s = 0.0;
                for (std::size_t x = 0; x < rows; ++x) s += std::conj(u(x, k + a_)) * av(x, b);
                out[a_ * tc + b] = s;
            }
        return out;
    };

    TailLinearization lin;
    lin.jac = ComplexMatrix(tr * tc, p.ambient_dim());
    for (std::size_t i = 0; i < p.ambient_dim(); ++i) lin.jac.set_column(i, project(p.blocks()[i]));
    lin.rhs = project(p.evaluate(t.r));
    return lin;
}

// Orthonormal basis (columns) of the complement of r.
ComplexMatrix tangent_basis(std::span<const cplx> r, const ToleranceConfig& tol)
{
    ComplexMatrix row(1, r.size());
    for (std::size_t i = 0; i < r.size(); ++i) row(0, i) = std::conj(r[i]);
    return null_space(row, tol);
}

CVector normalized(CVector v)
{
    const double nrm = norm2(v);
    for (auto& z : v) z /= nrm;
    return v;
}

// Minimum-norm Gauss-Newton direction restricted to the tangent space of the sphere.
CVector gauss_newton_direction(const TailLinearization& lin, const ComplexMatrix& tangent, const ToleranceConfig& tol)
{
    const ComplexMatrix jt = lin.jac * tangent;
    const SVDResult s = svd(jt);
    const std::size_t rk = rank_from_singular_values(s.singular_values, jt.rows(), jt.cols(), tol);
    CVector y(jt.cols(), 0.0);
    for (std::size_t i = 0; i < rk; ++i) {
        cplx coef = 0.0;
        for (std::size_t a = 0; a < jt.rows(); ++a) coef += std::conj(s.left_vectors(a, i)) * lin.rhs[a];
        coef /= s.singular_values[i];
        for (std::size_t b = 0; b < jt.cols(); ++b) y[b] -= coef * s.right_vectors(b, i);
    }
    return tangent * std::span<const cplx>(y);
}

// Steepest descent direction of |jac d + rhs|^2 projected onto the tangent space,
// scaled by the exact line minimizer of the quadratic model.
CVector gradient_direction(const TailLinearization& lin, std::span<const cplx> r)
{
    const ComplexMatrix jh = lin.jac.adjoint();
    CVector g = jh * std::span<const cplx>(lin.rhs);
    const cplx radial = inner(r, g);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= radial * r[i];
    const CVector jg = lin.jac * std::span<const cplx>(g);
    const double denom = norm2(jg);
    const double gn = norm2(g);
    if (denom == 0.0 || gn == 0.0) return CVector(g.size(), 0.0);
    const double alpha = (gn * gn) / (denom * denom);
    for (auto& z : g) z *= -alpha;
    return g;
}

struct DescentResult {
    CVector r;
    double residual = 0.0;
    double threshold = 0.0;
};

DescentResult descend(const Pencil& p, std::size_t k, CVector start, const SamplerConfig& config,
                      const ToleranceConfig& tol)
{
    TailModel model = tail_model(p, normalized(std::move(start)), k, tol);
    int stalls = 0;
    for (std::size_t iter = 0; iter < config.max_iter; ++iter) {
        if (model.residual < tol.abs_floor) break;
        const TailLinearization lin = linearize_tail(p, model, k);
        const ComplexMatrix tangent = tangent_basis(model.r, tol);

        auto try_direction = [&](const CVector& dir, CVector& accepted, double& accepted_energy) {
            if (norm2(dir) == 0.0) return false;
            double alpha = 1.0;
            for (int halving = 0; halving < 40; ++halving, alpha *= 0.5) {
                CVector cand(model.r.size());
                for (std::size_t i = 0; i < cand.size(); ++i) cand[i] = model.r[i] + alpha * dir[i];
                cand = normalized(std::move(cand));
                const double e = tail_energy(p, cand, k);
                if (e < model.energy) {
                    accepted = std::move(cand);
                    accepted_energy = e;
                    return true;
                }
            }
            return false;
        };

        CVector next;
        double next_energy = 0.0;
        bool moved = try_direction(gauss_newton_direction(lin, tangent, tol), next, next_energy);
        if (!moved) moved = try_direction(gradient_direction(lin, model.r), next, next_energy);
        if (!moved) break;

        CVector diff(next.size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = next[i] - model.r[i];
        const double step = norm2(diff);
        const double previous = model.energy;
        model = tail_model(p, std::move(next), k, tol);
        if (step < 1e-12) break;
        stalls = next_energy > previous * (1.0 - 1e-10) ? stalls + 1 : 0;
        if (stalls >= 3) break;
    }
    return {std::move(model.r), model.residual, model.threshold};
}

} // namespace

LocusSample sample_locus(const Pencil& p, std::size_t k, const SamplerConfig& config, const ToleranceConfig& tol)
{
    require_k(p, k);
    LocusSample sample;
    sample.k = k;
    sample.starts = config.starts;
    if (locus_is_trivial(p, k)) {
        sample.trivial = true;
        return sample;
    }

    sample.min_residual = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < config.starts; ++s) {
        std::mt19937_64 rng(derive_seed(config.seed, s));
        DescentResult res = descend(p, k, random_unit_vector(p.ambient_dim(), rng), config, tol);
        if (res.residual < sample.min_residual) {
            sample.min_residual = res.residual;
            sample.min_residual_threshold = res.threshold;
        }
        if (res.residual > res.threshold) continue;
        ProjectivePoint pt(res.r);
        // Re-check at the canonical representative; the rank decision must agree.
        const ResidualInfo info = residual_at(p, k, pt, tol);
        if (info.rank > k) continue;
        ++sample.converged;
        const bool seen = std::any_of(sample.points.begin(), sample.points.end(),
                                      [&](const LocusPoint& q) { return q.point.equals(pt); });
        if (!seen) sample.points.push_back({std::move(pt), info.residual, info.threshold});
    }
    if (config.starts == 0) sample.min_residual = 0.0;
    sample.clustered = sample.converged > 0 && sample.points.size() <= config.max_clusters;
    return sample;
}

std::size_t local_dimension(const Pencil& p, std::size_t k, const ProjectivePoint& point, const ToleranceConfig& tol)
{
    require_k(p, k);
    const std::size_t ambient = p.ambient_dim();
    const ResidualInfo info = residual_at(p, k, point, tol);
    if (info.rank > k) throw Error(ErrorCode::NotOnLocus, "point has rank " + std::to_string(info.rank) +
                                                             " > " + std::to_string(k));
    // Below rank k every (k+1)-minor vanishes to second order.
    if (locus_is_trivial(p, k) || info.rank < k) return ambient - 1;

    const TailModel model = tail_model(p, CVector(point.coords().begin(), point.coords().end()), k, tol);
    const TailLinearization lin = linearize_tail(p, model, k);
    const ComplexMatrix restricted = lin.jac * tangent_basis(model.r, tol);
    const std::size_t conormal = numerical_rank(restricted, tol);
    return ambient - 1 - std::min(conormal, ambient - 1);
}

EmptinessVerdict is_locus_empty(const Pencil& p, std::size_t k, const SamplerConfig& config, const ToleranceConfig& tol)
{
    require_k(p, k);
    EmptinessVerdict verdict;
    // V^0 ⊂ V^k, and V^0 is decided exactly.
    const LinearLocus zero = locus_zero(p, tol);
    if (!zero.empty()) {
        verdict.kind = EmptinessKind::NonemptyWitness;
        verdict.witness = zero.basis_points().front();
        return verdict;
    }
    if (k == 0) {
        verdict.kind = EmptinessKind::EmptyExact;
        return verdict;
    }
    if (locus_is_trivial(p, k)) {
        verdict.kind = EmptinessKind::NonemptyWitness;
        verdict.witness = ProjectivePoint::basis(p.ambient_dim(), 0);
        return verdict;
    }
    const LocusSample sample = sample_locus(p, k, config, tol);
    if (!sample.points.empty()) {
        verdict.kind = EmptinessKind::NonemptyWitness;
        verdict.witness = sample.points.front().point;
        verdict.min_residual = sample.points.front().residual;
        verdict.min_residual_threshold = sample.points.front().threshold;
        return verdict;
    }
    verdict.kind = EmptinessKind::EmptyHeuristic;
    verdict.min_residual = sample.min_residual;
    verdict.min_residual_threshold = sample.min_residual_threshold;
    return verdict;
}

} // namespace mixloci
