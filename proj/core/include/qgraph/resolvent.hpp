#pragma once

#include <string>
#include <vector>

#include "qgraph/secular.hpp"

namespace qgraph {

// k is (numerically) on the spectrum: 1 - S(k) T(k) cannot be inverted.
class NearPoleError : public Error {
public:
    NearPoleError(const std::string& what, double condition) : Error(what), condition_(condition) {}
    double condition() const { return condition_; }

private:
    double condition_;
};

// A point on the graph: edge row (externals first, then internals) and the
// local coordinate on that edge.
struct GraphPoint {
    int edge = 0;
    double x = 0.0;
};

// Resolvent kernel of -Delta(A, B) - k^2,
//   r(x, y) = r0(x, y) + (i / 2k) rho(x)^T M rho(y),   M = [1 - S T]^{-1} S,
// where rho_j(x) is row j of Phi(x, k) R_+^{-1}. The external columns of rho
// are exp(ikx); internal ones are exp(ikx) and exp(ik(a - x)), all bounded
// for Im k >= 0.
class ResolventKernel {
public:
    // Requires k != 0 and Im k >= 0. Throws NearPoleError when
    // cond(1 - S T) exceeds max_condition and SingularError when A + ikB is
    // singular.
    ResolventKernel(SecularSystem sys, cplx k, double max_condition = 1e12);

    cplx k() const { return k_; }
    const SecularSystem& system() const { return sys_; }
    const Matrix& scattering() const { return S_; }
    const Matrix& middle() const { return M_; }
    double middle_condition() const { return condition_; }

    Vector profile(GraphPoint p) const;
    Vector profile_dx(GraphPoint p) const;

    cplx free_part(GraphPoint x, GraphPoint y) const;
    cplx entry(GraphPoint x, GraphPoint y) const;
    // d/dx of entry(x, y).
    cplx entry_dx(GraphPoint x, GraphPoint y) const;

    // Full (|E| + |I|)^2 matrix with x_j, y_j the position on edge j.
    Matrix matrix(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const;

private:
    SecularSystem sys_;
    cplx k_;
    Matrix S_;
    Matrix M_;
    double condition_ = 0.0;
};

struct ResolventIdentityReport {
    double bc_residual = 0.0;        // relative ||A psi + B psi'|| of R(k) phi
    double ode_residual = 0.0;       // relative |(-psi'' - k^2 psi) - phi|
    double symmetry_residual = 0.0;  // relative |r(y, x; k)^* - r_adj(x, y; -conj k)|
    double quadrature_error = 0.0;   // change of the traces between two rules
    int test_functions = 0;
    int symmetry_samples = 0;
    bool passed = false;
};

struct ResolventCheckOptions {
    double tolerance = 1e-7;
    int quadrature_nodes = 48;
    double fd_step = 1e-3;     // relative to the edge scale
    double external_extent = 3.0;  // support window used on external edges
    int symmetry_pairs = 5;
    unsigned seed = 20240601u;
};

// Checks that R(k) phi satisfies the vertex conditions, that it solves
// -psi'' - k^2 psi = phi, and the adjoint symmetry of the kernel, using
// polynomial bump test functions supported inside each edge.
ResolventIdentityReport verify_resolvent_identity(const ResolventKernel& res,
                                                  const ResolventCheckOptions& opts = {});

// Gram matrix of the rho profiles: G_pq = sum_j int rho_j,p conj(rho_j,q).
// Requires Im k > 0 when the graph has external edges.
Matrix profile_gram(const SecularSystem& sys, cplx k);

// Hilbert-Schmidt norm of r1_1 - r1_2 in closed form. Both kernels must live
// on the same graph at the same k.
double hs_distance(const ResolventKernel& a, const ResolventKernel& b);

// Hilbert-Schmidt norm of the boundary part r1 of one kernel.
double hs_norm_boundary_part(const ResolventKernel& r);

struct SingularityProbe {
    double epsilon = 0.0;
    double middle_norm = 0.0;  // ||[1 - S T]^{-1} S|| at k + i epsilon
};

// Norm of the middle factor at k + i 10^-j, j = 1..6, for a real k > 0.
// Growth as epsilon -> 0 hints at a spectral singularity; it is not a proof.
std::vector<SingularityProbe> singularity_profile(const SecularSystem& sys, double k);

// CSV rows "x,y,re,im" for r_{j, jp} on an n x n grid over both edges.
// External edges are sampled on [0, external_extent].
std::string kernel_grid_csv(const ResolventKernel& res, int j, int jp, int n,
                            double external_extent = 5.0);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights);

}  // namespace qgraph
