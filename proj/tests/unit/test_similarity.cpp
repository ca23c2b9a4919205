#include <gtest/gtest.h>

#include <cmath>

#include "qgraph/presets.hpp"
#include "qgraph/similarity.hpp"

using namespace qgraph;

namespace {

Preset tau_preset(double t) {
    PresetParams p;
    p.tau = t;
    return make_preset("tau", p, std::nullopt);
}

// G = Q G_tau with Q the normalised Hadamard matrix.
Matrix tau_transform(double t) {
    Matrix q(2, 2), gt(2, 2);
    q << 1.0, 1.0, 1.0, -1.0;
    q /= std::sqrt(2.0);
    const cplx e = std::exp(I_UNIT * t);
    gt << -e, -1.0, -1.0 / e, 1.0;
    gt *= I_UNIT / std::sqrt(2.0 * std::cos(t));
    return q * gt;
}

}  // namespace

TEST(Similarity, TauMapsToKirchhoff) {
    const double t = 0.3;
    const Preset p = tau_preset(t);
    BlockTransform tr;
    tr.GE = tau_transform(t);
    tr.GI = Matrix(0, 0);
    const auto cert = verify_similarity(p.graph, p.bc, local::standard(2), tr);
    ASSERT_TRUE(cert.has_value());
    EXPECT_TRUE(cert->target_self_adjoint);
    EXPECT_LT(cert->projector_residual, 1e-12);
}

TEST(Similarity, IdentityIsTrivialCertificate) {
    const Preset p = tau_preset(0.7);
    const auto cert = verify_similarity(p.graph, p.bc, p.bc, BlockTransform::identity(p.graph));
    ASSERT_TRUE(cert.has_value());
    EXPECT_FALSE(cert->target_self_adjoint);
}

TEST(Similarity, WrongTargetRejected) {
    const Preset p = tau_preset(0.3);
    double residual = 0.0;
    EXPECT_FALSE(verify_similarity(p.graph, p.bc, local::dirichlet(2), BlockTransform::identity(p.graph),
                                   1e-9, &residual));
    EXPECT_GT(residual, 0.1);
}

TEST(Similarity, GeneralisedSignedSumDiagonaliser) {
    PresetParams pp;
    pp.plus = 2;
    pp.minus = 1;
    const Preset p = make_preset("gsgnsgn", pp, std::nullopt);
    Matrix g(3, 3);
    g << 1, -1, 1, 1, 1, 0, 1, 0, 1;
    Matrix d = Matrix::Zero(3, 3);
    d.diagonal() << 1.0, -1.0, -1.0;
    const Matrix s = cayley(p.bc, cplx{1.0, 0.0});
    EXPECT_LT((s - g * d * g.inverse()).norm(), 1e-12);

    // S_source = G_t^{-1} S_target G_t, so the transform is the inverse of g.
    BlockTransform tr;
    tr.GE = g.inverse();
    tr.GI = Matrix(0, 0);
    const BoundaryConditions target = from_cayley(d, cplx{1.0, 0.0});
    const auto cert = verify_similarity(p.graph, p.bc, target, tr);
    ASSERT_TRUE(cert.has_value());
    EXPECT_TRUE(cert->target_self_adjoint);
}

TEST(Similarity, SearchCertifiesTauAndBuildsMetric) {
    const double t = 0.3;
    const Preset p = tau_preset(t);
    const SimilaritySearch s = find_similarity_to_selfadjoint(p.graph, p.bc);
    ASSERT_EQ(s.outcome, SimilarityOutcome::Certified) << s.diagnostic;
    ASSERT_TRUE(s.certificate.has_value());
    const MetricOperator m = metric_operator(*s.certificate);
    EXPECT_GT(m.min_eigenvalue, 0.0);
    EXPECT_LT(m.inverse_residual, 1e-12);
    EXPECT_LT(m.quasi_residual, 1e-10);
    // Theta is fixed up to a positive factor; normalise the diagonal to 1 / cos t.
    const Matrix theta = m.theta * ((1.0 / std::cos(t)) / m.theta(0, 0).real());
    Matrix expected(2, 2);
    expected << 1.0, -I_UNIT * std::sin(t), I_UNIT * std::sin(t), 1.0;
    expected /= std::cos(t);
    EXPECT_LT((theta - expected).cwiseAbs().maxCoeff(), 1e-10);
    // Quasi-self-adjointness at the matrix level: S* = Theta S Theta^{-1}.
    const Matrix S = cayley(p.bc, cplx{0.0, 1.0});
    EXPECT_LT((S.adjoint() - m.theta * S * m.theta_inv).norm(), 1e-10);
}

TEST(Similarity, SearchOutcomes) {
    const Preset sg = make_preset("sgnsgn", {}, std::nullopt);
    EXPECT_EQ(find_similarity_to_selfadjoint(sg.graph, sg.bc).outcome, SimilarityOutcome::Irregular);

    const MetricGraph uneven({"u", "v"}, {{"u", "v", 1.0}, {"u", "v", 2.0}}, {});
    EXPECT_EQ(find_similarity_to_selfadjoint(uneven, make_preset("standard", {}, uneven).bc).outcome,
              SimilarityOutcome::UnequalLengths);

    // A complex delta on a half-line has |S(k)| != 1.
    const MetricGraph line = graphs::half_lines(1);
    EXPECT_EQ(find_similarity_to_selfadjoint(line, local::delta(1, {0.0, 1.0})).outcome,
              SimilarityOutcome::NonUnimodular);
}

TEST(Similarity, SelfAdjointHasIdentityMetric) {
    const MetricGraph g = graphs::half_lines(3);
    const SimilaritySearch s = find_similarity_to_selfadjoint(g, local::standard(3));
    ASSERT_EQ(s.outcome, SimilarityOutcome::Certified);
    const MetricOperator m = metric_operator(*s.certificate);
    const Matrix theta = m.theta / m.theta(0, 0);
    EXPECT_LT((theta - Matrix::Identity(3, 3)).norm(), 1e-9);
}

TEST(Similarity, DeltaScaledTarget) {
    const Preset p = make_preset("delta_scaled", {}, std::nullopt);
    const SimilaritySearch s = find_similarity_to_selfadjoint(p.graph, p.bc);
    ASSERT_EQ(s.outcome, SimilarityOutcome::Certified);
    // The target is the self-adjoint L' = [[0, 1], [1, 0]] with P = 0.
    Matrix l(2, 2);
    l << 0, 1, 1, 0;
    EXPECT_LT(projector_distance(s.certificate->target, {l, Matrix::Identity(2, 2)}), 1e-9);
    const MetricOperator m = metric_operator(*s.certificate);
    EXPECT_LT(std::abs(m.theta(0, 1)), 1e-12);
    EXPECT_NEAR(m.theta(1, 1).real() / m.theta(0, 0).real(), 4.0, 1e-9);
}

TEST(Similarity, DecoupleStar) {
    const Preset p = make_preset("star_standard_dirichlet", {}, std::nullopt);
    const Decoupling dec = decouple_symmetric_graph(p.graph, p.bc);
    ASSERT_TRUE(dec.intervals.has_value());
    int dd = 0, nd = 0;
    for (const auto& iv : *dec.intervals) {
        if (iv.left == EndType::Dirichlet && iv.right == EndType::Dirichlet) dd += iv.multiplicity;
        if (iv.left == EndType::Neumann && iv.right == EndType::Dirichlet) nd += iv.multiplicity;
    }
    EXPECT_EQ(dd, 2);
    EXPECT_EQ(nd, 1);
    SpectrumOptions o;
    o.re_max = 16.0;
    o.im_max = 3.0;
    const CrossValidation cv = cross_validate_decoupling(p.graph, p.bc, dec, o);
    EXPECT_TRUE(cv.matches);
    EXPECT_EQ(cv.direct_count, cv.decoupled_count);
}

TEST(Similarity, DecoupleReportsViolations) {
    const MetricGraph g = graphs::half_lines(2);
    const Decoupling dec = decouple_symmetric_graph(g, local::standard(2));
    EXPECT_FALSE(dec.intervals.has_value());
    EXPECT_FALSE(dec.violations.empty());
}

TEST(Similarity, IntervalConditions) {
    IntervalProblem p;
    p.left = EndType::Dirichlet;
    p.right = EndType::Neumann;
    p.left_sigma = -1.0;
    p.right_sigma = 1.0;
    const BoundaryConditions bc = interval_conditions(p, 1.0);
    Vector expected(2);
    expected << -1.0, 1.0;
    EXPECT_LT((cayley(bc, cplx{0.0, 1.0}).diagonal() - expected).norm(), 1e-12);
}
