#include "mixloci/states.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace mixloci {

namespace {

constexpr double kWeightSumTol = 1e-10;
constexpr double kDensityTol = 1e-10;

std::string shape_str(BipartiteShape s) { return "(" + std::to_string(s.m) + "," + std::to_string(s.n) + ")"; }

void require_shape(BipartiteShape shape)
{
    if (shape.m < 1 || shape.n < 1) throw Error(ErrorCode::ShapeMismatch, "shape dimensions must be >= 1");
}

cplx standard_complex_normal(std::mt19937_64& rng)
{
    std::normal_distribution<double> gauss(0.0, 1.0);
    const double re = gauss(rng);
    const double im = gauss(rng);
    return {re * M_SQRT1_2, im * M_SQRT1_2};
}

} // namespace

// ---------------------------------------------------------------------------
// Pure states

ComplexMatrix PureState::coefficient_matrix() const
{
    return ComplexMatrix(shape_.m, shape_.n, amps_);
}

ComplexMatrix PureState::projector() const
{
    const std::size_t d = amps_.size();
    ComplexMatrix p(d, d);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) p(i, j) = amps_[i] * std::conj(amps_[j]);
    return p;
}

PureState make_pure(std::span<const cplx> raw_amplitudes, BipartiteShape shape)
{
    require_shape(shape);
    if (raw_amplitudes.size() != shape.dim()) {
        throw Error(ErrorCode::ShapeMismatch, "amplitude count " + std::to_string(raw_amplitudes.size()) +
                                                  " does not match shape " + shape_str(shape));
    }
    for (const auto& z : raw_amplitudes) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
            throw Error(ErrorCode::InvalidInput, "non-finite amplitude");
    }
    const double nrm = norm2(raw_amplitudes);
    if (nrm == 0.0) throw Error(ErrorCode::ZeroVector, "cannot normalize the zero vector");
    CVector amps(raw_amplitudes.begin(), raw_amplitudes.end());
    for (auto& z : amps) z /= nrm;
    return PureState(shape, std::move(amps));
}

SchmidtDecomposition schmidt(const PureState& psi, const ToleranceConfig& tol)
{
    const ComplexMatrix c = psi.coefficient_matrix();
    const SVDResult s = svd(c);
    const std::size_t d = rank_from_singular_values(s.singular_values, c.rows(), c.cols(), tol);

    SchmidtDecomposition out;
    out.rank = d;
    out.coefficients.assign(s.singular_values.begin(), s.singular_values.begin() + static_cast<std::ptrdiff_t>(d));
    out.left_basis = ComplexMatrix(c.rows(), d);
    out.right_basis = ComplexMatrix(c.cols(), d);
    // c = U S V^H  =>  psi = sum_k s_k u_k ⊗ conj(v_k)
    for (std::size_t k = 0; k < d; ++k) {
        out.left_basis.set_column(k, s.left_vectors.column(k));
        CVector v = s.right_vectors.column(k);
        for (auto& z : v) z = std::conj(z);
        out.right_basis.set_column(k, v);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Ensembles

Ensemble Ensemble::make(BipartiteShape shape, std::vector<EnsembleMember> members)
{
    require_shape(shape);
    if (members.empty()) throw Error(ErrorCode::InvalidInput, "ensemble needs at least one member");
    double total = 0.0;
    for (const auto& mem : members) {
        if (!(mem.weight > 0.0) || !std::isfinite(mem.weight))
            throw Error(ErrorCode::WeightSumInvalid, "ensemble weights must be positive and finite");
        if (mem.state.shape() != shape) throw Error(ErrorCode::ShapeMismatch, "member shape differs from ensemble");
        total += mem.weight;
    }
    const bool rescale = std::abs(total - 1.0) > kWeightSumTol;
    if (rescale)
        for (auto& mem : members) mem.weight /= total;
    return Ensemble(shape, std::move(members), rescale);
}

Ensemble Ensemble::from_vectors(BipartiteShape shape, std::span<const double> weights,
                                std::span<const CVector> vectors)
{
    if (weights.size() != vectors.size())
        throw Error(ErrorCode::InvalidInput, "weight and vector counts differ");
    std::vector<EnsembleMember> members;
    members.reserve(vectors.size());
    bool rescaled_vectors = false;
    for (std::size_t l = 0; l < vectors.size(); ++l) {
        if (std::abs(norm2(vectors[l]) - 1.0) > 1e-12) rescaled_vectors = true;
        members.push_back({weights[l], make_pure(vectors[l], shape)});
    }
    Ensemble e = make(shape, std::move(members));
    e.normalized_ = e.normalized_ || rescaled_vectors;
    return e;
}

ComplexMatrix Ensemble::amplitude_matrix() const
{
    ComplexMatrix a(shape_.dim(), members_.size());
    for (std::size_t l = 0; l < members_.size(); ++l) a.set_column(l, members_[l].state.amplitudes());
    return a;
}

std::vector<double> Ensemble::weights() const
{
    std::vector<double> w;
    w.reserve(members_.size());
    for (const auto& mem : members_) w.push_back(mem.weight);
    return w;
}

// ---------------------------------------------------------------------------
// Density matrices

DensityMatrix DensityMatrix::from_matrix(BipartiteShape shape, const ComplexMatrix& matrix, bool rescale_trace)
{
    require_shape(shape);
    if (matrix.rows() != shape.dim() || matrix.cols() != shape.dim())
        throw Error(ErrorCode::ShapeMismatch, "density matrix must be " + std::to_string(shape.dim()) + "x" +
                                                  std::to_string(shape.dim()) + " for shape " + shape_str(shape));
    if (!matrix.is_finite()) throw Error(ErrorCode::InvalidInput, "density matrix has non-finite entries");
    const double scale = 1.0 + matrix.frobenius_norm();
    if ((matrix - matrix.adjoint()).frobenius_norm() > kDensityTol * scale)
        throw Error(ErrorCode::NotHermitian, "density matrix is not Hermitian");

    ComplexMatrix h = (matrix + matrix.adjoint()) * cplx{0.5};
    const double tr = h.trace().real();
    if (rescale_trace) {
        if (!(tr > 0.0)) throw Error(ErrorCode::NotDensity, "trace must be positive to rescale");
        h *= cplx{1.0 / tr};
    } else if (std::abs(tr - 1.0) > kDensityTol) {
        throw Error(ErrorCode::NotDensity, "trace " + std::to_string(tr) + " differs from 1");
    }

    const EigResult eig = hermitian_eig(h);
    const double lowest = eig.eigenvalues.back();
    if (lowest < -kDensityTol)
        throw Error(ErrorCode::NotDensity, "negative eigenvalue " + std::to_string(lowest));
    if (lowest < 0.0) {
        std::vector<double> clamped = eig.eigenvalues;
        for (auto& l : clamped) l = std::max(l, 0.0);
        h = eig.eigenvectors * ComplexMatrix::diagonal(clamped) * eig.eigenvectors.adjoint();
        h = (h + h.adjoint()) * cplx{0.5};
    }
    return DensityMatrix(shape, std::move(h));
}

ComplexMatrix DensityMatrix::block(std::size_t i, std::size_t j) const
{
    const std::size_t n = shape_.n;
    ComplexMatrix b(n, n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t c = 0; c < n; ++c) b(a, c) = matrix_(i * n + a, j * n + c);
    return b;
}

DensityMatrix density_from_ensemble(const Ensemble& e)
{
    const std::size_t d = e.shape().dim();
    ComplexMatrix rho(d, d);
    for (const auto& mem : e.members()) {
        const auto amps = mem.state.amplitudes();
        for (std::size_t i = 0; i < d; ++i) {
            const cplx wi = mem.weight * amps[i];
            for (std::size_t j = 0; j < d; ++j) rho(i, j) += wi * std::conj(amps[j]);
        }
    }
    rho = (rho + rho.adjoint()) * cplx{0.5};
    return DensityMatrix(e.shape(), std::move(rho));
}

Ensemble eigen_ensemble(const DensityMatrix& rho, const ToleranceConfig& tol)
{
    const EigResult eig = hermitian_eig(rho.matrix());
    const std::size_t d = rho.shape().dim();
    const double thr = tol.threshold(std::max(eig.eigenvalues.front(), 0.0), d, d);
    std::vector<EnsembleMember> members;
    for (std::size_t l = 0; l < d; ++l) {
        if (eig.eigenvalues[l] <= thr) break;
        members.push_back({eig.eigenvalues[l], make_pure(eig.eigenvectors.column(l), rho.shape())});
    }
    return Ensemble::make(rho.shape(), std::move(members));
}

std::vector<double> spectrum(const DensityMatrix& rho) { return hermitian_eig(rho.matrix()).eigenvalues; }

std::size_t rank(const DensityMatrix& rho, const ToleranceConfig& tol)
{
    const auto ev = spectrum(rho);
    std::vector<double> mags(ev.size());
    std::transform(ev.begin(), ev.end(), mags.begin(), [](double x) { return std::abs(x); });
    std::sort(mags.begin(), mags.end(), std::greater<>());
    return rank_from_singular_values(mags, rho.shape().dim(), rho.shape().dim(), tol);
}

DensityMatrix mix(std::span<const double> weights, std::span<const DensityMatrix> states)
{
    if (weights.size() != states.size() || states.empty())
        throw Error(ErrorCode::InvalidInput, "mix needs one weight per state and at least one state");
    double total = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw Error(ErrorCode::WeightSumInvalid, "mixing weights must be positive");
        total += w;
    }
    if (std::abs(total - 1.0) > kWeightSumTol)
        throw Error(ErrorCode::WeightSumInvalid, "mixing weights sum to " + std::to_string(total));
    const BipartiteShape shape = states.front().shape();
    ComplexMatrix out(shape.dim(), shape.dim());
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i].shape() != shape) throw Error(ErrorCode::ShapeMismatch, "mixed states differ in shape");
        out += states[i].matrix() * cplx{weights[i]};
    }
    return DensityMatrix::from_matrix(shape, out);
}

ComplexMatrix partial_trace(const DensityMatrix& rho, Side traced_out)
{
    const auto [m, n] = rho.shape();
    const ComplexMatrix& r = rho.matrix();
    if (traced_out == Side::A) {
        ComplexMatrix out(n, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < n; ++j)
                for (std::size_t jp = 0; jp < n; ++jp) out(j, jp) += r(i * n + j, i * n + jp);
        return out;
    }
    ComplexMatrix out(m, m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t ip = 0; ip < m; ++ip)
            for (std::size_t j = 0; j < n; ++j) out(i, ip) += r(i * n + j, ip * n + j);
    return out;
}

DensityMatrix apply_local_unitary(const DensityMatrix& rho, const ComplexMatrix& u, const ComplexMatrix& v)
{
    const auto shape = rho.shape();
    if (u.rows() != shape.m || u.cols() != shape.m || v.rows() != shape.n || v.cols() != shape.n)
        throw Error(ErrorCode::DimensionMismatch, "local unitaries do not match the state shape");
    const ComplexMatrix w = kron(u, v);
    return DensityMatrix::from_matrix(shape, w * rho.matrix() * w.adjoint());
}

// ---------------------------------------------------------------------------
// Random states

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index)
{
    // splitmix64 finalizer over a combined word
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

CVector random_unit_vector(std::size_t n, std::mt19937_64& rng)
{
    for (;;) {
        CVector v(n);
        for (auto& z : v) z = standard_complex_normal(rng);
        const double nrm = norm2(v);
        if (nrm > 1e-8) {
            for (auto& z : v) z /= nrm;
            return v;
        }
    }
}

PureState random_pure(BipartiteShape shape, std::mt19937_64& rng)
{
    require_shape(shape);
    const CVector v = random_unit_vector(shape.dim(), rng);
    return make_pure(v, shape);
}

PureState random_pure(BipartiteShape shape, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    return random_pure(shape, rng);
}

Ensemble random_ensemble(BipartiteShape shape, std::size_t r, std::mt19937_64& rng, const ToleranceConfig& tol)
{
    require_shape(shape);
    const std::size_t d = shape.dim();
    if (r < 1 || r > d)
        throw Error(ErrorCode::RankOutOfRange, "rank " + std::to_string(r) + " outside [1, " + std::to_string(d) + "]");

    for (int attempt = 0; attempt < 100; ++attempt) {
        ComplexMatrix basis(d, r);
        bool degenerate = false;
        for (std::size_t l = 0; l < r && !degenerate; ++l) {
            CVector v(d);
            for (auto& z : v) z = standard_complex_normal(rng);
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < l; ++k) {
                    const CVector bk = basis.column(k);
                    const cplx proj = inner(bk, v);
                    for (std::size_t i = 0; i < d; ++i) v[i] -= proj * bk[i];
                }
            }
            const double nrm = norm2(v);
            degenerate = nrm < 1e-6;
            if (!degenerate) {
                for (auto& z : v) z /= nrm;
                basis.set_column(l, v);
            }
        }
        std::exponential_distribution<double> expo(1.0);
        std::vector<double> weights(r);
        for (auto& w : weights) w = expo(rng);
        const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
        for (auto& w : weights) w /= total;
        if (degenerate) continue;

        std::vector<EnsembleMember> members;
        for (std::size_t l = 0; l < r; ++l) members.push_back({weights[l], make_pure(basis.column(l), shape)});
        Ensemble e = Ensemble::make(shape, std::move(members));
        if (rank(density_from_ensemble(e), tol) == r) return e;
    }
    throw Error(ErrorCode::RankOutOfRange, "could not draw a state of the requested rank");
}

DensityMatrix random_density(BipartiteShape shape, std::size_t r, std::mt19937_64& rng, const ToleranceConfig& tol)
{
    return density_from_ensemble(random_ensemble(shape, r, rng, tol));
}

DensityMatrix random_density(BipartiteShape shape, std::size_t r, std::uint64_t seed, const ToleranceConfig& tol)
{
    std::mt19937_64 rng(seed);
    return random_density(shape, r, rng, tol);
}

ComplexMatrix random_unitary(std::size_t n, std::mt19937_64& rng)
{
    // Gram-Schmidt on Ginibre columns is QR with a positive diagonal R, which is Haar.
    for (;;) {
        ComplexMatrix q(n, n);
        bool ok = true;
        for (std::size_t j = 0; j < n && ok; ++j) {
            CVector v(n);
            for (auto& z : v) z = standard_complex_normal(rng);
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t k = 0; k < j; ++k) {
                    const CVector qk = q.column(k);
                    const cplx proj = inner(qk, v);
                    for (std::size_t i = 0; i < n; ++i) v[i] -= proj * qk[i];
                }
            }
            const double nrm = norm2(v);
            ok = nrm > 1e-8;
            if (ok) {
                for (auto& z : v) z /= nrm;
                q.set_column(j, v);
            }
        }
        if (ok) return q;
    }
}

} // namespace mixloci
