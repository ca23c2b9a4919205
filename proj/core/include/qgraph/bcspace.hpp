#pragma once

#include <optional>
#include <string>

#include "qgraph/linalg.hpp"

namespace qgraph {

// Vertex conditions A psi + B psi' = 0 on the boundary space K (dimension d).
// Only the subspace Ker(A, B) of K^2 matters; (C A, C B) is equivalent for
// any invertible C.
struct BoundaryConditions {
    Matrix A;
    Matrix B;

    BoundaryConditions() = default;
    BoundaryConditions(Matrix a, Matrix b);

    int dim() const { return static_cast<int>(A.rows()); }
};

// m-sectorial parametrisation (L + P, P_perp) with P an orthogonal projector
// and L = P_perp L P_perp.
struct SectorialPair {
    Matrix P;
    Matrix L;
};

// Anti-linear map v -> C conj(v) on K.
struct AntiLinearSymmetry {
    Matrix C;
};

struct NumericOptions {
    double rank_factor = kDefaultRankFactor;
    double tol = 1e-9;  // relative tolerance for equality-type checks
};

struct RegularityResult {
    bool dim_ok = false;     // dim M == d
    bool regular = false;    // dim M == d and Ker A, Ker B intersect trivially
    std::optional<cplx> witness_k;
    double witness_condition = 0.0;
    RankInfo stacked_rank;   // rank of [A; B]
};

struct Classification {
    int d = 0;
    int dim_M = 0;
    RankInfo pair_rank;  // rank of (A, B)
    bool regular = false;
    std::optional<cplx> witness_k;
    bool self_adjoint = false;
    bool m_sectorial = false;
    std::optional<SectorialPair> sectorial;
    bool spectrum_is_whole_plane = false;
    // dim M == d but Ker A and Ker B share a vector: the resolvent set may be empty.
    bool irregular_dim_d = false;
    std::optional<bool> t_self_adjoint;
};

int dim_M(const BoundaryConditions& bc, double rank_factor = kDefaultRankFactor);
RegularityResult is_regular(const BoundaryConditions& bc, const NumericOptions& opt = {});
bool is_self_adjoint(const BoundaryConditions& bc, const NumericOptions& opt = {});

// S(k) = -(A + ikB)^{-1}(A - ikB). Throws SingularError when A + ikB is
// numerically singular.
Matrix cayley(const BoundaryConditions& bc, cplx k, double max_condition = 1e12);

// (A_S, B_S) = (-(S - 1)/2, (S + 1)/(2ik)).
BoundaryConditions from_cayley(const Matrix& S, cplx k);

// Best conditioned k among i 2^j, j = -4..8.
cplx cayley_witness(const BoundaryConditions& bc, double* condition = nullptr);

// Adjoint conditions. Regular input uses the Cayley representation at the
// witness k; otherwise M* = (J M)^perp. Throws Error when dim M > d, since
// the adjoint subspace then has dimension < d and no square (A', B') exists.
BoundaryConditions adjoint(const BoundaryConditions& bc, const NumericOptions& opt = {});

// Orthonormal basis (2d x m) of M(A, B).
Matrix subspace_basis(const BoundaryConditions& bc, double rank_factor = kDefaultRankFactor);

// Orthogonal projector onto M(A, B) in K^2 = (psi, psi').
Matrix projector_onto_M(const BoundaryConditions& bc, double rank_factor = kDefaultRankFactor);

// Spectral norm of the projector difference; throws Error when dim M differs.
double projector_distance(const BoundaryConditions& a, const BoundaryConditions& b,
                          double rank_factor = kDefaultRankFactor);

std::optional<SectorialPair> m_sectorial(const BoundaryConditions& bc,
                                         const NumericOptions& opt = {});
BoundaryConditions from_sectorial(const SectorialPair& p);

// B_eps = B + eps P_{Ker B}; falls back to B + eps V with V a partial
// isometry Ker B -> (Ran B)^perp when the former stays singular.
BoundaryConditions regularize(const BoundaryConditions& bc, double eps,
                              const NumericOptions& opt = {});

bool check_antilinear_symmetry(const BoundaryConditions& bc, const AntiLinearSymmetry& sym,
                               double kappa, const NumericOptions& opt = {});

Classification classify(const BoundaryConditions& bc, const NumericOptions& opt = {});

}  // namespace qgraph
