#include "qgraph/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

#include <Eigen/Eigenvalues>

namespace qgraph {

Matrix BlockTransform::assemble() const {
    const Eigen::Index ne = GE.rows(), ni = GI.rows();
    Matrix g = Matrix::Zero(ne + 2 * ni, ne + 2 * ni);
    g.topLeftCorner(ne, ne) = GE;
    g.block(ne, ne, ni, ni) = GI;
    g.bottomRightCorner(ni, ni) = GI;
    return g;
}

BlockTransform BlockTransform::inverse() const {
    BlockTransform out;
    out.GE = GE.size() ? Matrix(GE.inverse()) : GE;
    out.GI = GI.size() ? Matrix(GI.inverse()) : GI;
    return out;
}

BlockTransform BlockTransform::identity(const MetricGraph& g) {
    return {Matrix::Identity(g.num_external(), g.num_external()),
            Matrix::Identity(g.num_internal(), g.num_internal())};
}

std::string to_string(SimilarityOutcome o) {
    switch (o) {
        case SimilarityOutcome::Certified: return "certified";
        case SimilarityOutcome::Irregular: return "irregular";
        case SimilarityOutcome::UnequalLengths: return "unequal_lengths";
        case SimilarityOutcome::Defective: return "defective";
        case SimilarityOutcome::NonUnimodular: return "non_unimodular";
        case SimilarityOutcome::Obstruction: return "obstruction_inconclusive";
    }
    return "unknown";
}

std::string to_string(EndType t) {
    switch (t) {
        case EndType::Dirichlet: return "dirichlet";
        case EndType::Neumann: return "neumann";
        case EndType::Robin: return "robin";
    }
    return "unknown";
}

namespace {

void require_equal_lengths(const MetricGraph& g) {
    if (g.num_internal() > 0 && !g.equal_lengths())
        throw Error("similarity needs all internal edges of equal length");
}

void require_invertible(const Matrix& m, const char* name) {
    if (m.size() == 0) return;
    if (!(condition_number(m) < 1e12)) throw Error(std::string("block ") + name + " is singular");
}

double relative(double num, double den) { return den > 0 ? num / den : num; }

}  // namespace

std::optional<SimilarityCertificate> verify_similarity(const MetricGraph& g,
                                                       const BoundaryConditions& bc,
                                                       const BoundaryConditions& target,
                                                       const BlockTransform& t, double tol,
                                                       double* residual) {
    require_equal_lengths(g);
    if (t.GE.rows() != g.num_external() || t.GE.cols() != g.num_external() ||
        t.GI.rows() != g.num_internal() || t.GI.cols() != g.num_internal())
        throw Error("block transform does not match the graph");
    require_invertible(t.GE, "G_E");
    require_invertible(t.GI, "G_I");
    if (bc.dim() != g.dim() || target.dim() != g.dim())
        throw Error("boundary conditions do not match the graph");

    const Matrix G = t.assemble();
    const Matrix Gi = t.inverse().assemble();
    const BoundaryConditions moved(G * bc.A * Gi, G * bc.B * Gi);
    double dist = std::numeric_limits<double>::infinity();
    try {
        dist = projector_distance(moved, target);
    } catch (const Error&) {
    }
    if (residual) *residual = dist;
    if (!(dist <= tol)) return std::nullopt;

    SimilarityCertificate cert;
    cert.transform = t;
    cert.source = bc;
    cert.target = target;
    cert.projector_residual = dist;
    cert.target_self_adjoint = is_self_adjoint(target);
    if (cert.target_self_adjoint) cert.metric = G.adjoint() * G;
    return cert;
}

namespace {

// Orthogonal basis of Hermitian matrices diag(X, Y, Y).
std::vector<Matrix> structured_hermitian_basis(int ne, int ni) {
    const int d = ne + 2 * ni;
    std::vector<Matrix> basis;
    const double r = 1.0 / std::sqrt(2.0);
    auto add_block = [&](int n, std::vector<int> offsets) {
        for (int p = 0; p < n; ++p) {
            Matrix m = Matrix::Zero(d, d);
            for (int o : offsets) m(o + p, o + p) = 1.0;
            basis.push_back(m);
        }
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                Matrix sym = Matrix::Zero(d, d), asym = Matrix::Zero(d, d);
                for (int o : offsets) {
                    sym(o + p, o + q) = r;
                    sym(o + q, o + p) = r;
                    asym(o + p, o + q) = cplx{0.0, r};
                    asym(o + q, o + p) = cplx{0.0, -r};
                }
                basis.push_back(sym);
                basis.push_back(asym);
            }
        }
    };
    add_block(ne, {0});
    add_block(ni, {ne, ne + ni});
    return basis;
}

Matrix combine(const std::vector<Matrix>& basis, const Eigen::VectorXd& c) {
    Matrix m = Matrix::Zero(basis.front().rows(), basis.front().cols());
    for (std::size_t j = 0; j < basis.size(); ++j) m += c(static_cast<Eigen::Index>(j)) * basis[j];
    return 0.5 * (m + m.adjoint());
}

Eigen::VectorXd coordinates(const std::vector<Matrix>& basis, const Matrix& m) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j)
        c(static_cast<Eigen::Index>(j)) =
            (basis[j].adjoint() * m).trace().real() / basis[j].squaredNorm();
    return c;
}

// Positive definite (after a sign flip if needed) within relative margin.
std::optional<Matrix> positive_definite(Matrix theta) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(theta);
    const Eigen::VectorXd ev = es.eigenvalues();
    const double top = ev.cwiseAbs().maxCoeff();
    if (top == 0.0) return std::nullopt;
    if (ev.minCoeff() > 1e-8 * top) return theta;
    if (ev.maxCoeff() < -1e-8 * top) return Matrix(-theta);
    return std::nullopt;
}

Matrix hermitian_sqrt(const Matrix& m) {
    if (m.size() == 0) return m;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return es.operatorSqrt();
}

}  // namespace

SimilaritySearch find_similarity_to_selfadjoint(const MetricGraph& g,
                                                const BoundaryConditions& bc,
                                                const SimilarityOptions& opts) {
    SimilaritySearch out;
    const int ne = g.num_external(), ni = g.num_internal(), d = g.dim();
    if (!is_regular(bc).regular) {
        out.outcome = SimilarityOutcome::Irregular;
        out.diagnostic = "irregular boundary conditions; no similarity to a self-adjoint Laplacian";
        return out;
    }
    if (ni > 0 && !g.equal_lengths()) {
        out.outcome = SimilarityOutcome::UnequalLengths;
        out.diagnostic = "internal edges have different lengths";
        return out;
    }

    double k = opts.k;
    Matrix S;
    for (double factor : {1.0, 1.37, 0.71, 2.13, 0.43}) {
        try {
            S = cayley(bc, opts.k * factor);
            k = opts.k * factor;
            break;
        } catch (const SingularError&) {
        }
    }
    if (S.size() == 0) {
        out.diagnostic = "A + ikB singular at every trial k";
        return out;
    }

    Eigen::ComplexEigenSolver<Matrix> es(S);
    const Matrix V = es.eigenvectors();
    out.eigenvector_condition = condition_number(V);
    for (Eigen::Index j = 0; j < d; ++j)
        out.unimodularity_defect =
            std::max(out.unimodularity_defect, std::abs(std::abs(es.eigenvalues()(j)) - 1.0));
    if (!(out.eigenvector_condition <= opts.max_eigenvector_condition)) {
        out.outcome = SimilarityOutcome::Defective;
        out.diagnostic = "S(k) is numerically defective";
        return out;
    }
    if (out.unimodularity_defect > opts.tol) {
        out.outcome = SimilarityOutcome::NonUnimodular;
        out.diagnostic = "S(k) has eigenvalues off the unit circle";
        return out;
    }

    // Real linear map Theta -> S* Theta S - Theta on the structured space.
    const std::vector<Matrix> basis = structured_hermitian_basis(ne, ni);
    const Eigen::Index m = static_cast<Eigen::Index>(basis.size());
    Eigen::MatrixXd lin(2 * d * d, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        const Matrix img = S.adjoint() * basis[static_cast<std::size_t>(j)] * S -
                           basis[static_cast<std::size_t>(j)];
        const Eigen::Map<const Eigen::VectorXcd> v(img.data(), d * d);
        lin.col(j) << v.real(), v.imag();
    }
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(lin, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const double thr = std::max(1.0, sv.size() ? sv(0) : 0.0) * 1e-9;
    Eigen::Index rank = 0;
    for (Eigen::Index j = 0; j < sv.size(); ++j)
        if (sv(j) > thr) ++rank;
    const Eigen::MatrixXd null = svd.matrixV().rightCols(m - rank);
    out.metric_dimension = static_cast<int>(null.cols());
    if (null.cols() == 0) {
        out.outcome = SimilarityOutcome::Obstruction;
        out.diagnostic = "no block-structured Hermitian solution of S* Theta S = Theta (inconclusive)";
        return out;
    }

    std::vector<Eigen::VectorXd> candidates;
    const Eigen::MatrixXd proj = null * null.transpose();
    candidates.push_back(proj * coordinates(basis, Matrix::Identity(d, d)));
    const Matrix vinv = V.inverse();
    candidates.push_back(proj * coordinates(basis, vinv.adjoint() * vinv));
    std::mt19937 rng(opts.seed);
    std::normal_distribution<double> normal;
    for (int t = 0; t < opts.random_trials; ++t) {
        Eigen::VectorXd c(null.cols());
        for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = normal(rng);
        candidates.push_back(null * c);
    }

    std::optional<Matrix> theta;
    for (const auto& c : candidates) {
        if (c.norm() == 0.0) continue;
        if ((theta = positive_definite(combine(basis, c)))) break;
    }
    if (!theta) {
        out.outcome = SimilarityOutcome::Obstruction;
        out.diagnostic = "no positive definite block-structured metric found (inconclusive)";
        return out;
    }

    BlockTransform t{hermitian_sqrt(theta->topLeftCorner(ne, ne)),
                     hermitian_sqrt(theta->block(ne, ne, ni, ni))};
    const Matrix G = t.assemble();
    const Matrix U = G * S * t.inverse().assemble();
    const BoundaryConditions target = from_cayley(U, k);
    double residual = 0.0;
    auto cert = verify_similarity(g, bc, target, t, 1e-7, &residual);
    if (!cert) {
        out.outcome = SimilarityOutcome::Obstruction;
        out.diagnostic = "constructed transform failed verification (residual " +
                         std::to_string(residual) + ")";
        return out;
    }
    if (!cert->target_self_adjoint) {
        out.outcome = SimilarityOutcome::Obstruction;
        out.diagnostic = "constructed target is not self-adjoint within tolerance";
        return out;
    }
    cert->k = k;
    const Matrix Gi = t.inverse().assemble();
    for (double kappa : {0.5, 1.0, 2.0}) {
        try {
            const Matrix u = G * cayley(bc, cplx{0.0, kappa}) * Gi;
            if ((u - u.adjoint()).norm() > 1e-8 * std::max(1.0, u.norm())) cert->single_k = true;
        } catch (const SingularError&) {
        }
    }
    out.outcome = SimilarityOutcome::Certified;
    out.certificate = std::move(cert);
    return out;
}

MetricOperator metric_operator(const SimilarityCertificate& cert, const std::vector<double>& kappas) {
    if (!cert.target_self_adjoint) throw Error("metric operator needs a self-adjoint target");
    MetricOperator out;
    const Matrix G = cert.transform.assemble();
    out.theta = G.adjoint() * G;
    out.theta = 0.5 * (out.theta + out.theta.adjoint());
    out.theta_inv = out.theta.inverse();
    out.theta_inv = 0.5 * (out.theta_inv + out.theta_inv.adjoint());
    const Eigen::Index d = out.theta.rows();
    out.inverse_residual = (out.theta * out.theta_inv - Matrix::Identity(d, d)).norm();
    out.min_eigenvalue =
        d ? Eigen::SelfAdjointEigenSolver<Matrix>(out.theta).eigenvalues().minCoeff() : 0.0;
    for (double kappa : kappas) {
        try {
            const Matrix s = cayley(cert.source, cplx{0.0, kappa});
            const double r = (s.adjoint() - out.theta * s * out.theta_inv).norm();
            out.quasi_residual = std::max(out.quasi_residual, relative(r, s.norm()));
        } catch (const SingularError&) {
        }
    }
    return out;
}

namespace {

EndType end_type(cplx sigma, double tol) {
    if (std::abs(sigma + 1.0) <= tol) return EndType::Dirichlet;
    if (std::abs(sigma - 1.0) <= tol) return EndType::Neumann;
    return EndType::Robin;
}

double off_diagonal(const Matrix& m) {
    Matrix o = m;
    o.diagonal().setZero();
    return o.norm();
}

}  // namespace

Decoupling decouple_symmetric_graph(const MetricGraph& g, const BoundaryConditions& bc, double k,
                                    double tol) {
    Decoupling out;
    out.k = k;
    const int ni = g.num_internal();
    if (!g.compact()) out.violations.push_back("graph is not compact");
    if (ni == 0) out.violations.push_back("graph has no internal edges");
    if (ni > 0 && !g.equal_lengths()) out.violations.push_back("internal edges have different lengths");
    Matrix S;
    try {
        S = cayley(bc, k);
    } catch (const SingularError&) {
        out.violations.push_back("A + ikB is singular at the chosen k");
    }
    if (!out.violations.empty()) return out;

    const double scale = std::max(1.0, S.norm());
    const Matrix Sm = S.topLeftCorner(ni, ni);
    const Matrix Sp = S.bottomRightCorner(ni, ni);
    const double coupling = S.topRightCorner(ni, ni).norm() + S.bottomLeftCorner(ni, ni).norm();
    if (coupling > tol * scale)
        out.violations.push_back("vertex conditions couple the x = 0 and x = a ends");
    if ((Sm * Sp - Sp * Sm).norm() > tol * scale * scale)
        out.violations.push_back("end blocks of S do not commute");
    if (!out.violations.empty()) return out;

    const cplx mix{0.5772156649015329, 0.3183098861837907};
    Eigen::ComplexEigenSolver<Matrix> es(Sm + mix * Sp);
    const Matrix V = es.eigenvectors();
    const double cond = condition_number(V);
    if (!(cond <= 1e8)) {
        out.violations.push_back("end blocks are not simultaneously diagonalisable");
        return out;
    }
    const Matrix Vi = V.inverse();
    const double diag_tol = std::max(tol, 1e-12 * cond) * scale;
    const Matrix Dm = Vi * Sm * V, Dp = Vi * Sp * V;
    if (off_diagonal(Dm) > diag_tol || off_diagonal(Dp) > diag_tol) {
        out.violations.push_back("end blocks are not simultaneously diagonalisable");
        return out;
    }
    for (cplx kk : {cplx{1.7 * k, 0.0}, cplx{k, 0.5}}) {
        try {
            const Matrix s2 = cayley(bc, kk);
            const Matrix t2 = Vi * s2.topLeftCorner(ni, ni) * V;
            const Matrix b2 = Vi * s2.bottomRightCorner(ni, ni) * V;
            const double c2 = s2.topRightCorner(ni, ni).norm() + s2.bottomLeftCorner(ni, ni).norm();
            if (off_diagonal(t2) > diag_tol || off_diagonal(b2) > diag_tol || c2 > tol * scale) {
                out.violations.push_back("diagonalising transform depends on k");
                return out;
            }
        } catch (const SingularError&) {
        }
    }

    out.transform.GE = Matrix(0, 0);
    out.transform.GI = Vi;
    const double len = g.internal_edges().front().length;
    std::vector<IntervalProblem> raw;
    for (int i = 0; i < ni; ++i) {
        IntervalProblem p;
        p.left_sigma = Dm(i, i);
        p.right_sigma = Dp(i, i);
        p.left = end_type(p.left_sigma, 1e-8);
        p.right = end_type(p.right_sigma, 1e-8);
        if (p.left != EndType::Robin) p.left_sigma = p.left == EndType::Dirichlet ? -1.0 : 1.0;
        if (p.right != EndType::Robin) p.right_sigma = p.right == EndType::Dirichlet ? -1.0 : 1.0;
        p.length = len;
        raw.push_back(p);
    }
    auto key = [](const IntervalProblem& p) {
        return std::make_tuple(static_cast<int>(p.left), static_cast<int>(p.right), p.left_sigma.real(),
                               p.left_sigma.imag(), p.right_sigma.real(), p.right_sigma.imag());
    };
    std::sort(raw.begin(), raw.end(), [&](const auto& a, const auto& b) { return key(a) < key(b); });
    std::vector<IntervalProblem> grouped;
    for (const auto& p : raw) {
        if (!grouped.empty()) {
            auto& q = grouped.back();
            if (q.left == p.left && q.right == p.right && std::abs(q.left_sigma - p.left_sigma) <= 1e-8 &&
                std::abs(q.right_sigma - p.right_sigma) <= 1e-8) {
                ++q.multiplicity;
                continue;
            }
        }
        grouped.push_back(p);
    }
    out.intervals = grouped;
    return out;
}

BoundaryConditions interval_conditions(const IntervalProblem& p, double k) {
    Matrix A = Matrix::Zero(2, 2), B = Matrix::Zero(2, 2);
    const cplx sig[2] = {p.left_sigma, p.right_sigma};
    const EndType type[2] = {p.left, p.right};
    for (int j = 0; j < 2; ++j) {
        if (type[j] == EndType::Dirichlet) {
            A(j, j) = 1.0;
        } else if (type[j] == EndType::Neumann) {
            B(j, j) = 1.0;
        } else {
            A(j, j) = -0.5 * (sig[j] - 1.0);
            B(j, j) = (sig[j] + 1.0) / (2.0 * I_UNIT * k);
        }
    }
    return {A, B};
}

std::vector<SpectralPoint> decoupled_spectrum(const std::vector<IntervalProblem>& intervals,
                                              double k, const SpectrumOptions& opts) {
    std::vector<SpectralPoint> all;
    for (const auto& p : intervals) {
        const SecularSystem sys(graphs::interval(p.length), interval_conditions(p, k));
        auto pts = find_eigenvalues(sys, opts);
        if (auto z = zero_mode(sys, opts.rank_factor)) pts.push_back(*z);
        for (auto& q : pts) {
            q.winding_multiplicity *= p.multiplicity;
            q.geometric_multiplicity *= p.multiplicity;
            all.push_back(q);
        }
    }
    std::sort(all.begin(), all.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
        if (a.k.real() != b.k.real()) return a.k.real() < b.k.real();
        return a.k.imag() < b.k.imag();
    });
    return all;
}

namespace {

std::vector<cplx> expand(const std::vector<SpectralPoint>& pts) {
    std::vector<cplx> out;
    for (const auto& p : pts) {
        if (p.status != PointStatus::Eigenvalue && p.status != PointStatus::ZeroMode) continue;
        for (int m = 0; m < p.geometric_multiplicity; ++m) out.push_back(p.lambda);
    }
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        if (std::abs(a.real() - b.real()) > 1e-7 * (1.0 + std::abs(a))) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

}  // namespace

CrossValidation cross_validate_decoupling(const MetricGraph& g, const BoundaryConditions& bc,
                                          const Decoupling& dec, const SpectrumOptions& opts,
                                          double tol) {
    CrossValidation out;
    if (!dec.intervals) return out;
    const SecularSystem sys(g, bc);
    auto direct = find_eigenvalues(sys, opts);
    if (auto z = zero_mode(sys, opts.rank_factor)) direct.push_back(*z);
    const auto a = expand(direct);
    const auto b = expand(decoupled_spectrum(*dec.intervals, dec.k, opts));
    out.direct_count = static_cast<int>(a.size());
    out.decoupled_count = static_cast<int>(b.size());
    if (a.size() != b.size()) return out;
    for (std::size_t j = 0; j < a.size(); ++j)
        out.max_distance = std::max(out.max_distance, std::abs(std::sqrt(a[j]) - std::sqrt(b[j])));
    out.matches = out.max_distance <= tol;
    return out;
}

}  // namespace qgraph
