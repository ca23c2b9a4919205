// Randomised checks over many boundary conditions.

#include <gtest/gtest.h>

#include <random>

#include "qgraph/presets.hpp"
#include "qgraph/spectrum.hpp"

using namespace qgraph;

namespace {

constexpr int kTrials = 100;

Matrix random_matrix(int rows, int cols, std::mt19937& rng) {
    std::normal_distribution<double> nd;
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m(r, c) = {nd(rng), nd(rng)};
    return m;
}

BoundaryConditions random_bc(int d, std::mt19937& rng) {
    return {random_matrix(d, d, rng), random_matrix(d, d, rng)};
}

Matrix random_unitary(int d, std::mt19937& rng) {
    Eigen::HouseholderQR<Matrix> qr(random_matrix(d, d, rng));
    return qr.householderQ() * Matrix::Identity(d, d);
}

HolomorphicFunction det_of(const SecularSystem& sys) {
    return {[&sys](cplx k) { return sys.log_det_Z(k); }, [&sys](cplx k) { return sys.dlog_det_Z(k); }};
}

}  // namespace

TEST(Properties, AdjointDimensionsSum) {
    std::mt19937 rng(101);
    for (int t = 0; t < kTrials; ++t) {
        const int d = 1 + t % 5;
        const BoundaryConditions bc = random_bc(d, rng);
        const BoundaryConditions adj = adjoint(bc);
        EXPECT_EQ(dim_M(bc) + dim_M(adj), 2 * d) << t;
        EXPECT_LT(projector_distance(adjoint(adj), bc), 1e-9) << t;
    }
}

TEST(Properties, CayleyRoundTrip) {
    std::mt19937 rng(102);
    std::uniform_real_distribution<double> ud(0.2, 3.0);
    for (int t = 0; t < kTrials; ++t) {
        const int d = 1 + t % 6;
        const BoundaryConditions bc = random_bc(d, rng);
        const cplx k{ud(rng) - 1.0, ud(rng)};
        EXPECT_LT(projector_distance(from_cayley(cayley(bc, k), k), bc), 1e-9) << t;
    }
}

TEST(Properties, SelfAdjointMeansUnitary) {
    std::mt19937 rng(103);
    std::uniform_real_distribution<double> ud(0.1, 4.0);
    for (int t = 0; t < kTrials; ++t) {
        const int d = 1 + t % 6;
        // Conditions built from a unitary at one k are self-adjoint.
        const BoundaryConditions bc = from_cayley(random_unitary(d, rng), ud(rng));
        ASSERT_TRUE(is_self_adjoint(bc)) << t;
        for (double k : {0.3, 1.0, 2.7}) {
            const Matrix s = cayley(bc, k);
            EXPECT_LT((s.adjoint() * s - Matrix::Identity(d, d)).norm(), 1e-9) << t;
        }
    }
}

TEST(Properties, NonrealEigenvaluesPairWithAdjoint) {
    std::mt19937 rng(104);
    int nonreal = 0;
    for (int t = 0; t < kTrials; ++t) {
        const MetricGraph g = t % 2 ? graphs::interval(1.0 + 0.01 * t) : graphs::edge_with_lead(1.0);
        const SecularSystem sys(g, random_bc(g.dim(), rng));
        SpectrumOptions o;
        o.re_max = 8.0;
        o.im_max = 6.0;
        const auto pts = find_eigenvalues(sys, o);
        const AdjointPairingReport r = check_adjoint_pairing(sys, pts);
        nonreal += r.checked;
        EXPECT_EQ(r.failures, 0) << t << " worst " << r.worst;
    }
    EXPECT_GT(nonreal, kTrials);
}

TEST(Properties, ArgumentPrincipleUnderSubdivision) {
    std::mt19937 rng(105);
    for (int t = 0; t < kTrials; ++t) {
        const MetricGraph g = graphs::interval(1.0);
        const SecularSystem sys(g, random_bc(2, rng));
        const HolomorphicFunction f = det_of(sys);
        RootOptions ro;
        ro.samples_per_unit = 16.0;
        const Rect whole{-6.03, 6.07, 0.051, 5.09};
        const double xm = 0.137, ym = 2.513;
        const int total = winding_number(f, whole, ro);
        const int parts = winding_number(f, {whole.re0, xm, whole.im0, ym}, ro) +
                          winding_number(f, {xm, whole.re1, whole.im0, ym}, ro) +
                          winding_number(f, {whole.re0, xm, ym, whole.im1}, ro) +
                          winding_number(f, {xm, whole.re1, ym, whole.im1}, ro);
        EXPECT_EQ(total, parts) << t;
        const RootSearch s = find_roots(f, whole, ro);
        EXPECT_TRUE(s.complete) << t;
        EXPECT_EQ(s.multiplicity_sum, total) << t;
    }
}
