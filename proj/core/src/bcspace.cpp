#include "qgraph/bcspace.hpp"

#include <cmath>
#include <limits>

namespace qgraph {

namespace {

Matrix pair_matrix(const BoundaryConditions& bc) {
    Matrix ab(bc.A.rows(), 2 * bc.A.cols());
    ab << bc.A, bc.B;
    return ab;
}

double scale_of(const BoundaryConditions& bc) {
    return std::max({1.0, spectral_norm(bc.A), spectral_norm(bc.B)});
}

}  // namespace

BoundaryConditions::BoundaryConditions(Matrix a, Matrix b) : A(std::move(a)), B(std::move(b)) {
    if (A.rows() != A.cols() || B.rows() != B.cols() || A.rows() != B.rows())
        throw Error("boundary matrices A and B must be square of equal size");
}

int dim_M(const BoundaryConditions& bc, double rank_factor) {
    return 2 * bc.dim() - numerical_rank(pair_matrix(bc), rank_factor).rank;
}

cplx cayley_witness(const BoundaryConditions& bc, double* condition) {
    cplx best{0.0, 1.0};
    double best_cond = std::numeric_limits<double>::infinity();
    for (int j = -4; j <= 8; ++j) {
        const cplx k{0.0, std::ldexp(1.0, j)};
        const double c = condition_number(bc.A + I_UNIT * k * bc.B);
        if (c < best_cond) {
            best_cond = c;
            best = k;
        }
    }
    if (condition) *condition = best_cond;
    return best;
}

RegularityResult is_regular(const BoundaryConditions& bc, const NumericOptions& opt) {
    RegularityResult r;
    const int d = bc.dim();
    r.dim_ok = dim_M(bc, opt.rank_factor) == d;
    Matrix stacked(2 * d, d);
    stacked << bc.A, bc.B;
    r.stacked_rank = numerical_rank(stacked, opt.rank_factor);
    if (!r.dim_ok) return r;
    r.regular = r.stacked_rank.rank == d;
    if (r.regular) {
        double c = 0.0;
        r.witness_k = cayley_witness(bc, &c);
        r.witness_condition = c;
    }
    return r;
}

bool is_self_adjoint(const BoundaryConditions& bc, const NumericOptions& opt) {
    if (dim_M(bc, opt.rank_factor) != bc.dim()) return false;
    const double s = scale_of(bc);
    const Matrix diff = bc.A * bc.B.adjoint() - bc.B * bc.A.adjoint();
    return spectral_norm(diff) <= opt.tol * s * s;
}

Matrix cayley(const BoundaryConditions& bc, cplx k, double max_condition) {
    const Matrix plus = bc.A + I_UNIT * k * bc.B;
    const double c = condition_number(plus);
    if (!(c <= max_condition)) {
        throw SingularError("A + ikB is singular at k = (" + std::to_string(k.real()) + ", " +
                            std::to_string(k.imag()) + ")");
    }
    const Matrix minus = bc.A - I_UNIT * k * bc.B;
    return -plus.partialPivLu().solve(minus);
}

BoundaryConditions from_cayley(const Matrix& S, cplx k) {
    const Matrix one = Matrix::Identity(S.rows(), S.cols());
    return {-0.5 * (S - one), (S + one) / (2.0 * I_UNIT * k)};
}

Matrix subspace_basis(const BoundaryConditions& bc, double rank_factor) {
    return nullspace(pair_matrix(bc), rank_factor);
}

Matrix projector_onto_M(const BoundaryConditions& bc, double rank_factor) {
    const Matrix n = subspace_basis(bc, rank_factor);
    return projector_from_basis(n, 2 * bc.dim());
}

double projector_distance(const BoundaryConditions& a, const BoundaryConditions& b,
                          double rank_factor) {
    if (a.dim() != b.dim()) throw Error("projector_distance: boundary spaces differ in size");
    const Matrix na = subspace_basis(a, rank_factor);
    const Matrix nb = subspace_basis(b, rank_factor);
    if (na.cols() != nb.cols())
        throw Error("projector_distance: subspaces have different dimensions");
    const Eigen::Index n = 2 * a.dim();
    return spectral_norm(projector_from_basis(na, n) - projector_from_basis(nb, n));
}

BoundaryConditions adjoint(const BoundaryConditions& bc, const NumericOptions& opt) {
    const int d = bc.dim();
    const RegularityResult reg = is_regular(bc, opt);
    if (reg.regular) {
        const cplx k = *reg.witness_k;
        const Matrix Sa = cayley(bc, k).adjoint();
        const Matrix one = Matrix::Identity(d, d);
        return {-0.5 * (Sa - one), (Sa + one) / (-2.0 * I_UNIT * std::conj(k))};
    }
    const Matrix n = subspace_basis(bc, opt.rank_factor);
    const Eigen::Index m = n.cols();
    if (m > d) {
        throw Error("adjoint: dim M = " + std::to_string(m) + " exceeds d = " +
                    std::to_string(d) + "; the adjoint subspace is not representable by square A, B");
    }
    // J (u, v) = (v, -u); M* = (J M)^perp = Ker (J N)*.
    Matrix jn(2 * d, m);
    jn.topRows(d) = n.bottomRows(d);
    jn.bottomRows(d) = -n.topRows(d);
    const Matrix rows = jn.adjoint();
    Matrix a = Matrix::Zero(d, d);
    Matrix b = Matrix::Zero(d, d);
    a.topRows(m) = rows.leftCols(d);
    b.topRows(m) = rows.rightCols(d);
    return {a, b};
}

std::optional<SectorialPair> m_sectorial(const BoundaryConditions& bc, const NumericOptions& opt) {
    const int d = bc.dim();
    if (dim_M(bc, opt.rank_factor) != d) return std::nullopt;
    const Matrix one = Matrix::Identity(d, d);
    const Matrix q = one - projector_from_basis(range_basis(bc.B, opt.rank_factor), d);
    const Matrix p_perp = projector_from_basis(range_basis(bc.B.adjoint(), opt.rank_factor), d);
    if (spectral_norm(q * bc.A * p_perp) > opt.tol * scale_of(bc)) return std::nullopt;

    SectorialPair pair;
    pair.P = one - p_perp;
    pair.L = p_perp * pseudo_inverse(bc.B, opt.rank_factor) * bc.A * p_perp;
    if (projector_distance(bc, from_sectorial(pair), opt.rank_factor) > std::sqrt(opt.tol))
        return std::nullopt;
    return pair;
}

BoundaryConditions from_sectorial(const SectorialPair& p) {
    const Matrix one = Matrix::Identity(p.P.rows(), p.P.cols());
    return {p.L + p.P, one - p.P};
}

BoundaryConditions regularize(const BoundaryConditions& bc, double eps, const NumericOptions& opt) {
    const int d = bc.dim();
    const Matrix ker = nullspace(bc.B, opt.rank_factor);
    if (ker.cols() == 0) return bc;
    BoundaryConditions out{bc.A, bc.B + eps * projector_from_basis(ker, d)};
    if (numerical_rank(out.B, opt.rank_factor).rank == d) return out;
    // Ker B meets Ran B; map Ker B isometrically onto (Ran B)^perp instead.
    const Matrix coker = nullspace(bc.B.adjoint(), opt.rank_factor);
    const Eigen::Index r = std::min(ker.cols(), coker.cols());
    out.B = bc.B + eps * coker.leftCols(r) * ker.leftCols(r).adjoint();
    return out;
}

bool check_antilinear_symmetry(const BoundaryConditions& bc, const AntiLinearSymmetry& sym,
                               double kappa, const NumericOptions& opt) {
    const Matrix S = cayley(bc, cplx{0.0, kappa});
    const Matrix rhs = sym.C.partialPivLu().solve(S * sym.C).conjugate();
    const double scale = std::max(1.0, spectral_norm(S));
    return spectral_norm(S.adjoint() - rhs) <= opt.tol * scale;
}

Classification classify(const BoundaryConditions& bc, const NumericOptions& opt) {
    Classification c;
    c.d = bc.dim();
    c.pair_rank = numerical_rank(pair_matrix(bc), opt.rank_factor);
    c.dim_M = 2 * c.d - c.pair_rank.rank;
    const RegularityResult reg = is_regular(bc, opt);
    c.regular = reg.regular;
    c.witness_k = reg.witness_k;
    c.spectrum_is_whole_plane = c.dim_M != c.d;
    c.irregular_dim_d = reg.dim_ok && !reg.regular;
    c.self_adjoint = is_self_adjoint(bc, opt);
    c.sectorial = m_sectorial(bc, opt);
    c.m_sectorial = c.sectorial.has_value();
    if (c.regular) {
        const double kappa = c.witness_k->imag();
        c.t_self_adjoint = check_antilinear_symmetry(
            bc, AntiLinearSymmetry{Matrix::Identity(c.d, c.d)}, kappa, opt);
    }
    return c;
}

}  // namespace qgraph
