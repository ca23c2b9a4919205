#include <gtest/gtest.h>

#include <cmath>

#include "qgraph/bcspace.hpp"
#include "qgraph/presets.hpp"

using namespace qgraph;

namespace {

const double kPi = std::acos(-1.0);

Classification classify_preset(const std::string& name, const PresetParams& p = {},
                               const std::optional<MetricGraph>& g = std::nullopt) {
    return classify(make_preset(name, p, g).bc);
}

}  // namespace

TEST(BcSpace, CayleyOfDirichletAndNeumann) {
    const cplx k{0.7, 0.4};
    EXPECT_LT((cayley(local::dirichlet(3), k) + Matrix::Identity(3, 3)).norm(), 1e-14);
    EXPECT_LT((cayley(local::neumann(3), k) - Matrix::Identity(3, 3)).norm(), 1e-14);
}

TEST(BcSpace, CayleyOfStandardIsKIndependent) {
    // S = (2/nu) J - 1 for standard conditions.
    const int nu = 4;
    Matrix expected = Matrix::Constant(nu, nu, 2.0 / nu) - Matrix::Identity(nu, nu);
    for (cplx k : {cplx{1.0, 0.0}, cplx{0.0, 2.0}, cplx{3.0, -0.5}})
        EXPECT_LT((cayley(local::standard(nu), k) - expected).norm(), 1e-13);
}

TEST(BcSpace, CayleyOfDeltaMatchesScalarFormula) {
    // On one half-line the condition is psi' = gamma psi, i.e. A = -gamma, B = 1.
    const cplx gamma{0.3, -0.8}, k{1.1, 0.2};
    const Matrix s = cayley(local::delta(1, gamma), k);
    const cplx expected = -(-gamma - I_UNIT * k) / (-gamma + I_UNIT * k);
    EXPECT_LT(std::abs(s(0, 0) - expected), 1e-14);
}

TEST(BcSpace, GeneralisedSignedSumCayleyMatrix) {
    Matrix expected(3, 3);
    expected << 1, 2, -2, 2, 1, -2, 2, 2, -3;
    const BoundaryConditions bc = local::signed_sum(2, 1);
    for (cplx k : {cplx{1.0, 0.0}, cplx{0.0, 1.0}, cplx{2.5, 0.3}})
        EXPECT_LT((cayley(bc, k) - expected).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BcSpace, FromCayleyRoundTrip) {
    const BoundaryConditions bc = local::tau(0.4);
    const cplx k{0.0, 1.3};
    const BoundaryConditions back = from_cayley(cayley(bc, k), k);
    EXPECT_LT(projector_distance(bc, back), 1e-12);
}

TEST(BcSpace, PresetClassification) {
    const MetricGraph star = graphs::half_lines(3);
    for (const char* name : {"dirichlet", "neumann", "standard", "kirchhoff"}) {
        const Classification c = classify_preset(name, {}, star);
        EXPECT_TRUE(c.regular) << name;
        EXPECT_TRUE(c.self_adjoint) << name;
    }
    PresetParams real_delta;
    real_delta.gamma = cplx{2.0, 0.0};
    EXPECT_TRUE(classify_preset("delta", real_delta, star).self_adjoint);

    const Classification sg = classify_preset("sgnsgn");
    EXPECT_FALSE(sg.regular);
    EXPECT_TRUE(sg.irregular_dim_d);

    const Classification inter = classify_preset("intermediate");
    EXPECT_TRUE(inter.regular);
    EXPECT_FALSE(inter.self_adjoint);

    const Classification empty = classify_preset("empty_spectrum");
    EXPECT_FALSE(empty.regular);

    EXPECT_TRUE(classify_preset("residual_example").regular);
    EXPECT_TRUE(classify_preset("delta_scaled").m_sectorial);
    EXPECT_TRUE(classify_preset("spectral_singularity").regular);
}

TEST(BcSpace, GeneralisedSignedSumIrregularIffBalanced) {
    for (int p = 1; p <= 3; ++p) {
        for (int m = 1; m <= 3; ++m) {
            PresetParams pp;
            pp.plus = p;
            pp.minus = m;
            EXPECT_EQ(classify_preset("gsgnsgn", pp).regular, p != m) << p << "," << m;
        }
    }
}

TEST(BcSpace, TauRegularIffBelowHalfPi) {
    for (double t : {0.0, 0.3, 1.0, 1.5, 1.5707, kPi / 2}) {
        PresetParams pp;
        pp.tau = t;
        const Classification c = classify_preset("tau", pp);
        const bool expected = t < kPi / 2;
        EXPECT_EQ(c.regular, expected) << t;
        if (expected) EXPECT_EQ(c.self_adjoint, std::abs(std::sin(t)) < 1e-12) << t;
    }
}

TEST(BcSpace, ComplexDeltaSectorialForm) {
    const cplx gamma{1.0, 2.0};
    const int nu = 3;
    const Classification c = classify(local::delta(nu, gamma));
    ASSERT_TRUE(c.m_sectorial);
    const Matrix p_perp = Matrix::Constant(nu, nu, 1.0 / nu);
    EXPECT_LT((c.sectorial->P - (Matrix::Identity(nu, nu) - p_perp)).norm(), 1e-12);
    EXPECT_LT((c.sectorial->L + (gamma / static_cast<double>(nu)) * p_perp).norm(), 1e-12);
    EXPECT_FALSE(c.self_adjoint);
}

TEST(BcSpace, AdjointOfSelfAdjointIsItself) {
    const BoundaryConditions bc = local::delta(3, {1.5, 0.0});
    EXPECT_LT(projector_distance(adjoint(bc), bc), 1e-12);
}

TEST(BcSpace, AdjointOfComplexDeltaConjugatesGamma) {
    const cplx gamma{0.4, -1.2};
    const BoundaryConditions adj = adjoint(local::delta(2, gamma));
    EXPECT_LT(projector_distance(adj, local::delta(2, std::conj(gamma))), 1e-12);
}

TEST(BcSpace, DimensionOfM) {
    EXPECT_EQ(dim_M(local::dirichlet(2)), 2);
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    EXPECT_EQ(dim_M({a, b}), 3);
    const Classification c = classify({a, b});
    EXPECT_TRUE(c.spectrum_is_whole_plane);
    EXPECT_THROW(adjoint({a, b}), Error);
}

TEST(BcSpace, RegularizeRestoresRegularity) {
    const BoundaryConditions sg = make_preset("sgnsgn", {}, std::nullopt).bc;
    for (double eps : {0.5, 0.1, 0.01}) {
        const BoundaryConditions r = regularize(sg, eps);
        EXPECT_TRUE(is_regular(r).regular) << eps;
        EXPECT_LT(projector_distance(r, sg), 2.0 * eps + 1e-12);
    }
}

TEST(BcSpace, TauIsTSelfAdjoint) {
    const Classification c = classify(local::tau(0.3));
    ASSERT_TRUE(c.t_self_adjoint.has_value());
    EXPECT_TRUE(*c.t_self_adjoint);
}
