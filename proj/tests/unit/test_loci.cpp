#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mixloci/loci.hpp"
#include "test_support.hpp"

using namespace mixloci;
namespace mt = mixloci::testing;

namespace {

ProjectivePoint pt(std::initializer_list<cplx> c) { return ProjectivePoint(CVector(c)); }

CVector random_coords(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    CVector v(d);
    for (auto& z : v) z = {g(rng), g(rng)};
    return v;
}

Pencil pencil_of(const Ensemble& e, Side side = Side::A) { return pencil_from_ensemble(e, side); }

/// A second ensemble for the same state: mix sqrt(p_l) v_l with a random isometry.
Ensemble remixed(const Ensemble& e, std::size_t extra, std::mt19937_64& rng)
{
    const std::size_t t = e.size();
    const std::size_t t2 = t + extra;
    const ComplexMatrix u = random_unitary(t2, rng);
    std::vector<CVector> vecs;
    std::vector<double> weights;
    for (std::size_t k = 0; k < t2; ++k) {
        CVector w(e.shape().dim(), 0.0);
        for (std::size_t l = 0; l < t; ++l) {
            const auto& mem = e.members()[l];
            for (std::size_t x = 0; x < w.size(); ++x)
                w[x] += u(l, k) * std::sqrt(mem.weight) * mem.state.amplitudes()[x];
        }
        const double nrm = norm2(w);
        if (nrm < 1e-12) continue;
        weights.push_back(nrm * nrm);
        vecs.push_back(w);
    }
    return Ensemble::from_vectors(e.shape(), weights, vecs);
}

/// Projective dimension of V^k at r from the complex Jacobian of every
/// (k+1)-minor, by central differences, restricted to directions orthogonal to r.
std::size_t minors_oracle_dimension(const std::function<ComplexMatrix(std::span<const cplx>)>& eval,
                                    std::span<const cplx> r0, std::size_t k)
{
    const std::size_t m = r0.size();
    CVector r(r0.begin(), r0.end());
    const double nr = norm2(r);
    for (auto& z : r) z /= nr;
    const double h = 1e-5;
    std::vector<CVector> cols;
    for (std::size_t i = 0; i < m; ++i) {
        CVector plus = r, minus = r;
        plus[i] += h;
        minus[i] -= h;
        const auto fp = mt::minors(eval(plus), k + 1);
        const auto fm = mt::minors(eval(minus), k + 1);
        CVector d(fp.size());
        for (std::size_t q = 0; q < fp.size(); ++q) d[q] = (fp[q] - fm[q]) / (2.0 * h);
        cols.push_back(d);
    }
    const ComplexMatrix jac = ComplexMatrix::from_columns(cols, cols.front().size());
    // Orthonormal basis of r-perp: null space of the row r^dagger.
    ComplexMatrix row(1, m);
    for (std::size_t i = 0; i < m; ++i) row(0, i) = std::conj(r[i]);
    const ComplexMatrix tangent = null_space(row);
    const ComplexMatrix restricted = jac * tangent;
    const auto sv = singular_values(restricted);
    const double scale = std::max(1.0, sv.empty() ? 0.0 : sv.front());
    std::size_t rank = 0;
    for (double s : sv)
        if (s > 1e-6 * scale) ++rank;
    return (m - 1) - rank;
}

} // namespace

TEST(Pencil, SingleProductMember)
{
    const Ensemble e = mt::uniform_ensemble(2, 2, {mt::ket(2, 2, {{1, 1}})});
    const Pencil p = pencil_of(e);
    ASSERT_EQ(p.ambient_dim(), 2u);
    EXPECT_EQ(p.block_rows(), 2u);
    EXPECT_EQ(p.block_cols(), 1u);
    EXPECT_EQ(p.blocks()[0](0, 0), cplx(1));
    EXPECT_EQ(p.blocks()[0](1, 0), cplx(0));
    EXPECT_EQ(p.blocks()[1].frobenius_norm(), 0.0);
}

TEST(Pencil, SideBSwapsRoles)
{
    // |12> on (2,3): side B block j=2 holds the A-amplitude i=1.
    const Ensemble e = mt::uniform_ensemble(2, 3, {mt::ket(2, 3, {{1, 2}})});
    const Pencil p = pencil_of(e, Side::B);
    ASSERT_EQ(p.ambient_dim(), 3u);
    EXPECT_EQ(p.block_rows(), 2u);
    EXPECT_EQ(p.blocks()[1](0, 0), cplx(1));
    EXPECT_EQ(p.blocks()[0].frobenius_norm(), 0.0);
}

TEST(Pencil, EvaluateRejectsWrongDimension)
{
    const Pencil p = pencil_of(mt::example1_ensemble());
    try {
        p.evaluate(CVector{1, 0, 0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(Pencil, MatchesReferenceMatricesUpToColumnScaling)
{
    std::mt19937_64 rng(1);
    const Pencil p2 = pencil_of(mt::example2_target_ensemble());
    const Pencil p2c = pencil_of(mt::example2_component_ensemble());
    const Pencil p3 = pencil_of(mt::example3_ensemble());
    const Pencil p4 = pencil_of(mt::example4_ensemble());
    for (int t = 0; t < 20; ++t) {
        const CVector r3 = random_coords(3, rng);
        const CVector r4 = random_coords(4, rng);
        // The third member |12>+|33> puts r_3 (the reference matrix has r_2) at entry (3,3).
        ComplexMatrix m5 = mt::reference_pencil_example2(r3);
        m5(2, 2) = r3[2];
        EXPECT_TRUE(mt::equal_up_to_positive_column_scaling(p2.evaluate(r3), m5, 1e-10));
        EXPECT_FALSE(mt::equal_up_to_positive_column_scaling(p2.evaluate(r3), mt::reference_pencil_example2(r3), 1e-10));
        // The reference component matrix lists the members in the order 1, 3, 2.
        ComplexMatrix m6 = mt::reference_pencil_example2_component(r3);
        const ComplexMatrix m6p = ComplexMatrix::from_columns(
            std::vector<CVector>{m6.column(0), m6.column(2), m6.column(1)}, 3);
        EXPECT_TRUE(mt::equal_up_to_positive_column_scaling(p2c.evaluate(r3), m6p, 1e-10));
        EXPECT_TRUE(mt::equal_up_to_positive_column_scaling(p3.evaluate(r3), mt::reference_pencil_example3(r3), 1e-10));
        EXPECT_TRUE(mt::equal_up_to_positive_column_scaling(p4.evaluate(r4), mt::reference_pencil_example4(r4), 1e-10));
    }
}

TEST(ProjectivePointTest, Canonicalization)
{
    const ProjectivePoint p = pt({cplx(0, 2), cplx(0, -1)});
    EXPECT_NEAR(norm2(p.coords()), 1.0, 1e-15);
    EXPECT_NEAR(p[0].imag(), 0.0, 1e-15);
    EXPECT_GT(p[0].real(), 0.0);
    EXPECT_TRUE(p.equals(pt({2, -1})));
    EXPECT_FALSE(p.equals(pt({1, 1})));
}

TEST(ProjectivePointTest, TieGoesToLowestIndex)
{
    const ProjectivePoint p = pt({cplx(0, 1), -1});
    EXPECT_GT(p[0].real(), 0.0);
    EXPECT_NEAR(p[0].imag(), 0.0, 1e-15);
}

TEST(ProjectivePointTest, ZeroVectorRejected)
{
    try {
        pt({0, 0});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroVector);
    }
}

TEST(HermitianForm, BasisProjector)
{
    const DensityMatrix rho = density_from_ensemble(mt::uniform_ensemble(2, 2, {mt::ket(2, 2, {{1, 1}})}));
    const ComplexMatrix h = hermitian_form(rho, pt({1, 0}), Side::A);
    EXPECT_LE(mt::residual_norm(h, ComplexMatrix(2, 2, {1, 0, 0, 0})), 1e-15);
}

TEST(HermitianForm, ExampleOneVanishesAtItsPoint)
{
    const DensityMatrix rho = density_from_ensemble(mt::example1_ensemble());
    EXPECT_LE(hermitian_form(rho, pt({1, -1}), Side::A).frobenius_norm(), 1e-15);
}

TEST(HermitianForm, IsHermitianPsd)
{
    std::mt19937_64 rng(2);
    for (int t = 0; t < 50; ++t) {
        const DensityMatrix rho = random_density({3, 2}, 1 + rng() % 6, rng);
        for (Side side : {Side::A, Side::B}) {
            const ProjectivePoint x(random_coords(ambient_dim(rho.shape(), side), rng));
            const ComplexMatrix h = hermitian_form(rho, x, side);
            EXPECT_LE(mt::residual_norm(h, h.adjoint()), 1e-14);
            for (double l : hermitian_eig(h).eigenvalues) EXPECT_GE(l, -1e-14);
        }
    }
}

TEST(HermitianForm, DimensionMismatch)
{
    const DensityMatrix rho = density_from_ensemble(mt::example1_ensemble());
    try {
        hermitian_form(rho, pt({1, 0, 0}), Side::A);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(RankAt, ExampleTwoTargetOnLineRankTwo)
{
    std::mt19937_64 rng(3);
    const Pencil p = pencil_of(mt::example2_target_ensemble());
    for (int t = 0; t < 20; ++t) {
        CVector r = random_coords(3, rng);
        r[0] = 0.0;
        EXPECT_LE(rank_at(p, ProjectivePoint(r)), 2u);
    }
}

TEST(RankAt, ExampleTwoComponentFullRankAtZeroOneOne)
{
    const CVector r{0, 1, 1};
    EXPECT_NEAR(std::abs(mt::determinant(mt::reference_pencil_example2_component(r))), 2.0, 1e-14);
    EXPECT_EQ(rank_at(pencil_of(mt::example2_component_ensemble()), ProjectivePoint(r)), 3u);
}

TEST(RankAt, BasisPointGivesRankOfFirstBlock)
{
    std::mt19937_64 rng(4);
    for (int t = 0; t < 20; ++t) {
        const Pencil p = pencil_from_density(random_density({3, 3}, 1 + rng() % 9, rng), Side::A);
        EXPECT_EQ(rank_at(p, ProjectivePoint::basis(3, 0)), numerical_rank(p.blocks()[0]));
    }
}

TEST(InLocus, ExampleThree)
{
    const Pencil p = pencil_of(mt::example3_ensemble());
    EXPECT_TRUE(in_locus(p, 0, pt({0, 1, -1})));
    EXPECT_FALSE(in_locus(p, 0, pt({1, 0, 0})));
    EXPECT_EQ(rank_at(p, pt({1, 0, 0})), 3u);
}

TEST(InLocus, FullRankBoundAlwaysHolds)
{
    std::mt19937_64 rng(5);
    const Pencil p = pencil_of(mt::example4_ensemble());
    for (int t = 0; t < 20; ++t) EXPECT_TRUE(in_locus(p, p.max_rank(), ProjectivePoint(random_coords(4, rng))));
}

TEST(LocusZero, ExampleOne)
{
    const LinearLocus l = locus_zero(pencil_of(mt::example1_ensemble()));
    EXPECT_EQ(l.projective_dimension, 0);
    EXPECT_TRUE(l.basis_points().front().equals(pt({1, -1})));
}

TEST(LocusZero, ExampleThree)
{
    const LinearLocus l = locus_zero(pencil_of(mt::example3_ensemble()));
    EXPECT_EQ(l.projective_dimension, 0);
    EXPECT_TRUE(l.basis_points().front().equals(pt({0, 1, -1})));
}

TEST(LocusZero, BellStateIsEmpty)
{
    const LinearLocus l = locus_zero(pencil_of(mt::bell_ensemble()));
    EXPECT_TRUE(l.empty());
    EXPECT_EQ(l.projective_dimension, -1);
}

TEST(LocusZero, BasisVectorsEvaluateToZero)
{
    std::mt19937_64 rng(6);
    for (int t = 0; t < 50; ++t) {
        // Restrict side A to a random subspace so that V^0 is nonempty.
        const std::size_t m = 4;
        const std::size_t d = 1 + rng() % 3;
        const ComplexMatrix proj = mt::random_low_rank(m, m, d, rng);
        const DensityMatrix base = random_density({m, 2}, 1 + rng() % 8, rng);
        const ComplexMatrix op = kron(proj, ComplexMatrix::identity(2));
        const DensityMatrix rho = DensityMatrix::from_matrix({m, 2}, op * base.matrix() * op.adjoint(), true);
        const Pencil p = pencil_from_density(rho, Side::A);
        const LinearLocus l = locus_zero(p);
        // V^0 is the annihilator of the support of the reduced state on A.
        const std::size_t support = numerical_rank(partial_trace(rho, Side::B));
        EXPECT_LE(support, d);
        EXPECT_EQ(l.projective_dimension, static_cast<int>(m - 1 - support));
        for (const auto& b : l.basis_points()) {
            const ComplexMatrix e = p.evaluate(b.coords());
            const ToleranceConfig tol;
            EXPECT_LE(e.frobenius_norm(), tol.threshold(p.stacked().frobenius_norm(), e.rows(), e.cols()));
            EXPECT_TRUE(in_locus(p, 0, b));
        }
    }
}

TEST(SampleLocus, ExampleFourFindsTheLine)
{
    const Pencil p = pencil_of(mt::example4_ensemble());
    const LocusSample s = sample_locus(p, 2, SamplerConfig{.starts = 64, .seed = 1});
    ASSERT_FALSE(s.points.empty());
    bool on_line = false;
    for (const auto& q : s.points) {
        EXPECT_TRUE(in_locus(p, 2, q.point));
        EXPECT_LE(q.residual, q.threshold);
        if (std::abs(q.point[0]) <= 1e-6 && std::abs(q.point[1]) <= 1e-6) on_line = true;
    }
    EXPECT_TRUE(on_line);
}

TEST(SampleLocus, ExampleTwoTargetFindsRowOneLine)
{
    const Pencil p = pencil_of(mt::example2_target_ensemble());
    const LocusSample s = sample_locus(p, 2, SamplerConfig{.starts = 64, .seed = 3});
    bool on_line = false;
    for (const auto& q : s.points) {
        EXPECT_LE(q.residual, q.threshold);
        if (std::abs(q.point[0]) <= 1e-6) on_line = true;
    }
    EXPECT_TRUE(on_line);
}

TEST(SampleLocus, TrivialAtMaxRank)
{
    const Pencil p = pencil_of(mt::example1_ensemble());
    EXPECT_TRUE(sample_locus(p, p.max_rank(), {}).trivial);
}

TEST(SampleLocus, InvalidK)
{
    const Pencil p = pencil_of(mt::example1_ensemble());
    try {
        sample_locus(p, p.block_rows() + 1, {});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidK);
    }
}

TEST(SampleLocus, DeterministicForFixedSeed)
{
    const Pencil p = pencil_of(mt::example4_ensemble());
    const SamplerConfig cfg{.starts = 16, .seed = 42};
    const LocusSample a = sample_locus(p, 2, cfg);
    const LocusSample b = sample_locus(p, 2, cfg);
    ASSERT_EQ(a.points.size(), b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(a.points[i].point[j], b.points[i].point[j]);
    }
}

TEST(SampleLocus, EveryPointReverifiesOnRandomStates)
{
    std::mt19937_64 rng(7);
    for (int t = 0; t < 10; ++t) {
        const Pencil p = pencil_from_density(random_density({3, 3}, 3, rng), Side::A);
        const LocusSample s = sample_locus(p, 2, SamplerConfig{.starts = 16, .seed = static_cast<std::uint64_t>(t)});
        EXPECT_FALSE(s.points.empty());
        for (const auto& q : s.points) EXPECT_TRUE(in_locus(p, 2, q.point));
    }
}

TEST(LocalDimension, ExampleOneIsolatedPoint)
{
    EXPECT_EQ(local_dimension(pencil_of(mt::example1_ensemble()), 0, pt({1, -1})), 0u);
}

TEST(LocalDimension, ExampleFourLine)
{
    std::mt19937_64 rng(8);
    const Pencil p = pencil_of(mt::example4_ensemble());
    for (int t = 0; t < 10; ++t) {
        CVector r = random_coords(4, rng);
        r[0] = r[1] = 0.0;
        EXPECT_GE(local_dimension(p, 2, ProjectivePoint(r)), 1u);
    }
}

TEST(LocalDimension, NotOnLocus)
{
    try {
        local_dimension(pencil_of(mt::example3_ensemble()), 0, pt({1, 0, 0}));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NotOnLocus);
    }
}

TEST(LocalDimension, AgreesWithMinorsJacobianOracle)
{
    std::mt19937_64 rng(9);
    struct Case {
        std::function<ComplexMatrix(std::span<const cplx>)> eval;
        Pencil pencil;
        std::size_t k;
        CVector point;
    };
    std::vector<Case> cases;
    cases.push_back({mt::reference_pencil_example3, pencil_of(mt::example3_ensemble()), 0, {0, 1, -1}});
    for (int t = 0; t < 5; ++t) {
        CVector r4 = random_coords(4, rng);
        r4[0] = r4[1] = 0.0;
        cases.push_back({mt::reference_pencil_example4, pencil_of(mt::example4_ensemble()), 2, r4});
        CVector r3 = random_coords(3, rng);
        r3[0] = 0.0;
        cases.push_back({mt::reference_pencil_example2, pencil_of(mt::example2_target_ensemble()), 2, r3});
    }
    for (const auto& c : cases) {
        const ProjectivePoint x(c.point);
        const std::size_t expected = minors_oracle_dimension(c.eval, c.point, c.k);
        EXPECT_EQ(local_dimension(c.pencil, c.k, x), expected);
    }
}

TEST(LocalDimension, SampledPointsAgreeWithOracle)
{
    // Random rank-3 states on (3,3): V^2 is the cubic curve det = 0, dimension 1.
    std::mt19937_64 rng(10);
    for (int t = 0; t < 5; ++t) {
        const Ensemble e = random_ensemble({3, 3}, 3, rng);
        const Pencil p = pencil_of(e);
        const LocusSample s = sample_locus(p, 2, SamplerConfig{.starts = 8, .seed = static_cast<std::uint64_t>(t)});
        ASSERT_FALSE(s.points.empty());
        auto eval = [&](std::span<const cplx> r) { return p.evaluate(r); };
        for (const auto& q : s.points) {
            EXPECT_EQ(local_dimension(p, 2, q.point), minors_oracle_dimension(eval, q.point.coords(), 2));
            EXPECT_EQ(local_dimension(p, 2, q.point), 1u);
        }
    }
}

TEST(LocalDimension, KZeroMatchesLinearLocus)
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
        const std::size_t m = 4;
        const std::size_t d = 1 + rng() % 3;
        const ComplexMatrix op = kron(mt::random_low_rank(m, m, d, rng), ComplexMatrix::identity(3));
        const DensityMatrix base = random_density({m, 3}, 1 + rng() % 12, rng);
        const DensityMatrix rho = DensityMatrix::from_matrix({m, 3}, op * base.matrix() * op.adjoint(), true);
        const Pencil p = pencil_from_density(rho, Side::A);
        const LinearLocus l = locus_zero(p);
        for (const auto& b : l.basis_points())
            EXPECT_EQ(static_cast<int>(local_dimension(p, 0, b)), l.projective_dimension);
    }
}

TEST(Properties, RankEquivalenceHermitianFormVsPencil)
{
    std::mt19937_64 rng(12);
    for (BipartiteShape shape : {BipartiteShape{2, 2}, BipartiteShape{2, 3}, BipartiteShape{3, 3}}) {
        for (int s = 0; s < 5; ++s) {
            const DensityMatrix rho = random_density(shape, 1 + rng() % shape.dim(), rng);
            for (Side side : {Side::A, Side::B}) {
                const Pencil p = pencil_from_ensemble(eigen_ensemble(rho), side);
                for (int t = 0; t < 200; ++t) {
                    const ProjectivePoint x(random_coords(ambient_dim(shape, side), rng));
                    EXPECT_EQ(numerical_rank(hermitian_form(rho, x, side)), rank_at(p, x));
                }
            }
        }
    }
}

TEST(Properties, DecompositionIndependence)
{
    std::mt19937_64 rng(13);
    std::vector<std::pair<Ensemble, std::vector<CVector>>> cases;
    cases.push_back({mt::example2_target_ensemble(), {{0, 1, 0}, {0, 1, 2}, {1, 0, 0}}});
    cases.push_back({mt::example3_ensemble(), {{0, 1, -1}, {1, 0, 0}}});
    cases.push_back({mt::example4_ensemble(), {{0, 0, 1, 2}, {0, 0, 1, 0}, {1, 1, 1, 1}}});
    for (auto& [e, special] : cases) {
        const Pencil p = pencil_of(e);
        const Pencil q = pencil_of(remixed(e, 2, rng));
        for (int t = 0; t < 50; ++t) special.push_back(random_coords(p.ambient_dim(), rng));
        for (const auto& r : special) {
            const ProjectivePoint x(r);
            EXPECT_EQ(rank_at(p, x), rank_at(q, x));
        }
    }
}

TEST(Properties, ColumnScalingInvariance)
{
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> mag(0.1, 10.0);
    const Ensemble e = mt::example4_ensemble();
    std::vector<CVector> scaled;
    std::vector<double> weights;
    for (const auto& mem : e.members()) {
        const cplx c = std::polar(mag(rng), phase(rng));
        CVector v(mem.state.amplitudes().begin(), mem.state.amplitudes().end());
        for (auto& z : v) z *= c;
        scaled.push_back(v);
        weights.push_back(mem.weight);
    }
    const Pencil p = pencil_of(e);
    const Pencil q = pencil_of(Ensemble::from_vectors(e.shape(), weights, scaled));
    for (int t = 0; t < 50; ++t) {
        CVector r = random_coords(4, rng);
        if (t % 2) r[0] = r[1] = 0.0;
        const ProjectivePoint x(r);
        EXPECT_EQ(rank_at(p, x), rank_at(q, x));
    }
}

TEST(Properties, Monotonicity)
{
    std::mt19937_64 rng(15);
    const Pencil p = pencil_of(mt::example4_ensemble());
    for (int t = 0; t < 100; ++t) {
        CVector r = random_coords(4, rng);
        if (t % 3 == 0) r[0] = r[1] = 0.0;
        const ProjectivePoint x(r);
        for (std::size_t k = 0; k + 1 <= p.max_rank(); ++k)
            if (in_locus(p, k, x)) EXPECT_TRUE(in_locus(p, k + 1, x));
    }
}

TEST(IsLocusEmpty, BellKZeroExact)
{
    EXPECT_EQ(is_locus_empty(pencil_of(mt::bell_ensemble()), 0).kind, EmptinessKind::EmptyExact);
}

TEST(IsLocusEmpty, ExampleThreeWitness)
{
    const EmptinessVerdict v = is_locus_empty(pencil_of(mt::example3_ensemble()), 0);
    ASSERT_EQ(v.kind, EmptinessKind::NonemptyWitness);
    EXPECT_TRUE(v.witness->equals(pt({0, 1, -1})));
}

TEST(IsLocusEmpty, GenericCubicCurveIsNonempty)
{
    std::mt19937_64 rng(16);
    for (int t = 0; t < 10; ++t) {
        const Pencil p = pencil_from_density(random_density({3, 3}, 3, rng), Side::A);
        const EmptinessVerdict v = is_locus_empty(p, 2, SamplerConfig{.starts = 16, .seed = 1});
        ASSERT_EQ(v.kind, EmptinessKind::NonemptyWitness);
        EXPECT_TRUE(in_locus(p, 2, *v.witness));
    }
}

TEST(IsLocusEmpty, ZeroPencilIsWholeSpace)
{
    const Pencil p(Side::A, {ComplexMatrix(2, 2), ComplexMatrix(2, 2)});
    EXPECT_TRUE(p.is_zero());
    EXPECT_EQ(locus_zero(p).projective_dimension, 1);
    EXPECT_TRUE(sample_locus(p, 1, {}).trivial);
}
