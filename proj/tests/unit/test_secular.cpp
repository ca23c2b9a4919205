#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "qgraph/presets.hpp"
#include "qgraph/secular.hpp"

using namespace qgraph;

namespace {

const double kPi = std::acos(-1.0);

Matrix random_matrix(int n, std::mt19937& rng) {
    std::normal_distribution<double> nd;
    Matrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m(r, c) = {nd(rng), nd(rng)};
    return m;
}

SecularSystem mixed_system(std::mt19937& rng) {
    const MetricGraph g({"u", "v"}, {{"u", "v", 1.0}, {"u", "v", 1.7}}, {{"v"}});
    return SecularSystem(g, {random_matrix(g.dim(), rng), random_matrix(g.dim(), rng)});
}

}  // namespace

TEST(Secular, DirichletIntervalDeterminant) {
    // det Z = -2i sin(ka) up to sign conventions; zeros at k = n pi / a.
    const SecularSystem sys(graphs::interval(2.0), local::dirichlet(2));
    for (int n = 1; n <= 4; ++n) {
        const Matrix z = sys.Z(n * kPi / 2.0);
        EXPECT_LT(std::abs(z.determinant()), 1e-12) << n;
    }
    const cplx k{0.8, 0.3};
    EXPECT_NEAR(std::abs(sys.Z(k).determinant()), std::abs(2.0 * std::sin(2.0 * k)), 1e-12);
}

TEST(Secular, FactorizationHolds) {
    std::mt19937 rng(11);
    for (int trial = 0; trial < 5; ++trial) {
        const SecularSystem sys = mixed_system(rng);
        for (cplx k : {cplx{0.5, 0.2}, cplx{2.0, 1.0}, cplx{0.0, 3.0}})
            EXPECT_LT(sys.factorization_residual(k), 1e-10 * (1.0 + sys.Z(k).norm()));
    }
}

TEST(Secular, LogDetMatchesDeterminant) {
    std::mt19937 rng(12);
    const SecularSystem sys = mixed_system(rng);
    const cplx k{1.3, 0.6};
    const LogDet ld = sys.log_det_Z(k);
    ASSERT_FALSE(ld.singular);
    const cplx det = sys.Z(k).determinant();
    EXPECT_NEAR(ld.value.real(), std::log(std::abs(det)), 1e-10);
    EXPECT_NEAR(std::remainder(ld.value.imag() - std::arg(det), 2.0 * kPi), 0.0, 1e-10);
}

TEST(Secular, LogDerivativeMatchesFiniteDifference) {
    std::mt19937 rng(13);
    const SecularSystem sys = mixed_system(rng);
    const cplx k{0.9, 0.4};
    const double h = 1e-5;
    const cplx fd = (sys.Z(k + h).determinant() - sys.Z(k - h).determinant()) / (2.0 * h) /
                    sys.Z(k).determinant();
    EXPECT_LT(std::abs(sys.dlog_det_Z(k) - fd), 1e-7 * (1.0 + std::abs(fd)));
    const Matrix dz_fd = (sys.Z(k + h) - sys.Z(k - h)) / (2.0 * h);
    EXPECT_LT((sys.dZ(k) - dz_fd).norm(), 1e-7 * (1.0 + dz_fd.norm()));
}

TEST(Secular, ScaledMatrixHasSameKernel) {
    const SecularSystem sys(graphs::interval(1.0), local::dirichlet(2));
    const Eigen::JacobiSVD<Matrix> svd(sys.Z_scaled(kPi));
    EXPECT_LT(svd.singularValues()(1), 1e-12);
}

TEST(Secular, ZeroModeMatrix) {
    // Neumann interval: constants are a zero mode, so alpha = 1, beta = 0 is a kernel vector.
    const SecularSystem sys(graphs::interval(1.0), local::neumann(2));
    const Matrix m = sys.zero_mode_matrix();
    ASSERT_EQ(m.cols(), 2);
    EXPECT_LT(m.col(0).norm(), 1e-14);
    EXPECT_GT(m.col(1).norm(), 0.5);
}
