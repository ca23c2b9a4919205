#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "qgraph/presets.hpp"
#include "qgraph/resolvent.hpp"

using namespace qgraph;

namespace {

const double kPi = std::acos(-1.0);

Preset tau_preset(double t) {
    PresetParams p;
    p.tau = t;
    return make_preset("tau", p, std::nullopt);
}

SecularSystem dirichlet_pi() { return SecularSystem(graphs::interval(kPi), local::dirichlet(2)); }

}  // namespace

TEST(Resolvent, DirichletGreenFunction) {
    const ResolventKernel r(dirichlet_pi(), cplx{0.0, 1.0});
    for (double x : {0.1, 0.9, 1.7, 2.9})
        for (double y : {0.2, 1.1, 2.5, 3.0})
            EXPECT_LT(std::abs(r.entry({0, x}, {0, y}) - oracle::dirichlet_green_pi(x, y)), 1e-13)
                << x << "," << y;
}

TEST(Resolvent, DerivativeMatchesFiniteDifference) {
    const Preset p = tau_preset(0.4);
    const ResolventKernel r(SecularSystem(p.graph, p.bc), cplx{1.0, 1.0});
    const double h = 1e-5;
    for (double x : {0.3, 1.2}) {
        const GraphPoint y{1, 0.7};
        const cplx fd = (r.entry({0, x + h}, y) - r.entry({0, x - h}, y)) / (2.0 * h);
        EXPECT_LT(std::abs(r.entry_dx({0, x}, y) - fd), 1e-8);
    }
}

TEST(Resolvent, IdentitiesHold) {
    const Preset tau = tau_preset(0.4);
    const MetricGraph star = graphs::compact_star(3, 1.0);
    const Preset sd = make_preset("standard", {}, star);
    for (const SecularSystem& sys :
         {dirichlet_pi(), SecularSystem(tau.graph, tau.bc), SecularSystem(sd.graph, sd.bc)}) {
        for (cplx k : {cplx{0.0, 1.0}, cplx{0.0, 2.0}, cplx{1.0, 1.0}}) {
            const ResolventIdentityReport rep = verify_resolvent_identity(ResolventKernel(sys, k));
            EXPECT_TRUE(rep.passed) << k << " bc " << rep.bc_residual << " ode " << rep.ode_residual
                                    << " sym " << rep.symmetry_residual;
        }
    }
}

TEST(Resolvent, HilbertSchmidtClosedFormMatchesQuadrature) {
    // Complex Robin ends psi' = -(1 + 0.3i) psi in inward derivatives.
    const SecularSystem sys(graphs::interval(1.5),
                            {Matrix::Identity(2, 2) * cplx(1.0, 0.3), Matrix::Identity(2, 2)});
    const ResolventKernel r(sys, cplx{0.8, 0.9});
    const double a = 1.5;
    const int n = 200;
    const auto inner = [&](double x) {
        return oracle::simpson(
            [&](double y) {
                const cplx v = r.entry({0, x}, {0, y}) - r.free_part({0, x}, {0, y});
                return cplx(std::norm(v), 0.0);
            },
            0.0, a, n);
    };
    const double quad = oracle::simpson(inner, 0.0, a, n).real();
    EXPECT_NEAR(hs_norm_boundary_part(r), std::sqrt(quad), 1e-9 * std::sqrt(quad));
}

TEST(Resolvent, HilbertSchmidtOnHalfLines) {
    const Preset tau = tau_preset(0.4);
    const ResolventKernel r(SecularSystem(tau.graph, tau.bc), cplx{0.5, 2.0});
    // The boundary part decays like exp(-2 Im k (x + y)); 9 units leaves e^-36.
    const double ext = 9.0;
    const int n = 1200;
    double total = 0.0;
    for (int j = 0; j < 2; ++j) {
        for (int jp = 0; jp < 2; ++jp) {
            const auto inner = [&](double x) {
                return oracle::simpson(
                    [&](double y) {
                        const cplx v = r.entry({j, x}, {jp, y}) - r.free_part({j, x}, {jp, y});
                        return cplx(std::norm(v), 0.0);
                    },
                    0.0, ext, n);
            };
            total += oracle::simpson(inner, 0.0, ext, n).real();
        }
    }
    EXPECT_NEAR(hs_norm_boundary_part(r), std::sqrt(total), 1e-7 * std::sqrt(total));
}

TEST(Resolvent, NormConvergenceAlongDeltaFamily) {
    const MetricGraph g = graphs::half_lines(3);
    const cplx k{0.0, 1.0};
    const ResolventKernel limit(SecularSystem(g, local::standard(3)), k);
    double prev = 1e300;
    for (int j = 1; j <= 20; ++j) {
        const double eps = std::ldexp(1.0, -j);
        const double d = hs_distance(ResolventKernel(SecularSystem(g, local::delta(3, eps)), k), limit);
        EXPECT_LT(d, prev) << j;
        prev = d;
    }
    EXPECT_LT(prev, 1e-6);
}

TEST(Resolvent, NearPoleIsReported) {
    EXPECT_THROW(ResolventKernel(dirichlet_pi(), cplx{2.0, 0.0}), NearPoleError);
    EXPECT_THROW(ResolventKernel(dirichlet_pi(), cplx{0.0, -1.0}), Error);
}

TEST(Resolvent, SingularityProfileGrows) {
    const Preset p = make_preset("spectral_singularity", {}, std::nullopt);
    const auto prof = singularity_profile(SecularSystem(p.graph, p.bc), 1.0);
    ASSERT_EQ(prof.size(), 6u);
    for (std::size_t j = 1; j < prof.size(); ++j) EXPECT_GT(prof[j].middle_norm, 5.0 * prof[j - 1].middle_norm);
    // A regular real point stays bounded.
    const SecularSystem dir(graphs::interval(1.0), local::dirichlet(2));
    const auto flat = singularity_profile(dir, 1.0);
    EXPECT_LT(flat.back().middle_norm, 2.0 * flat.front().middle_norm);
}

TEST(Resolvent, KernelGridCsv) {
    const ResolventKernel r(dirichlet_pi(), cplx{0.0, 1.0});
    const std::string csv = kernel_grid_csv(r, 0, 0, 5);
    std::istringstream in(csv);
    std::string line;
    int rows = 0;
    std::getline(in, line);
    EXPECT_EQ(line, "x,y,re,im");
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 25);
}
