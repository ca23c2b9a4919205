#include "qgraph/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "qgraph/bcspace.hpp"

namespace qgraph {

void gauss_legendre(int n, Eigen::VectorXd& nodes, Eigen::VectorXd& weights) {
    if (n < 1) throw Error("gauss_legendre: need at least one node");
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double b = i / std::sqrt(4.0 * i * i - 1.0);
        jac(i, i - 1) = b;
        jac(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    nodes = es.eigenvalues();
    weights = 2.0 * es.eigenvectors().row(0).transpose().array().square();
}

ResolventKernel::ResolventKernel(SecularSystem sys, cplx k, double max_condition)
    : sys_(std::move(sys)), k_(k) {
    if (k == cplx{0.0, 0.0}) throw Error("resolvent kernel: k must be nonzero");
    if (k.imag() < 0.0) throw Error("resolvent kernel: Im k must be nonnegative");
    S_ = cayley(sys_.bc(), k);
    const int d = sys_.dim();
    const Matrix f = Matrix::Identity(d, d) - S_ * sys_.T(k);
    condition_ = condition_number(f);
    if (!(condition_ <= max_condition)) {
        std::ostringstream msg;
        msg << "resolvent near pole at k = (" << k.real() << ", " << k.imag()
            << "): cond(1 - S T) = " << condition_;
        throw NearPoleError(msg.str(), condition_);
    }
    M_ = f.partialPivLu().solve(S_);
}

Vector ResolventKernel::profile(GraphPoint p) const {
    const int ne = sys_.graph().num_external(), ni = sys_.graph().num_internal();
    Vector v = Vector::Zero(sys_.dim());
    if (p.edge < 0 || p.edge >= ne + ni) throw Error("resolvent kernel: edge out of range");
    if (p.edge < ne) {
        v(p.edge) = std::exp(I_UNIT * k_ * p.x);
    } else {
        const int i = p.edge - ne;
        const double a = sys_.graph().internal_edges()[static_cast<std::size_t>(i)].length;
        v(ne + i) = std::exp(I_UNIT * k_ * p.x);
        v(ne + ni + i) = std::exp(I_UNIT * k_ * (a - p.x));
    }
    return v;
}

Vector ResolventKernel::profile_dx(GraphPoint p) const {
    const int ne = sys_.graph().num_external(), ni = sys_.graph().num_internal();
    Vector v = profile(p);
    const cplx ik = I_UNIT * k_;
    if (p.edge < ne) {
        v(p.edge) *= ik;
    } else {
        const int i = p.edge - ne;
        v(ne + i) *= ik;
        v(ne + ni + i) *= -ik;
    }
    return v;
}

cplx ResolventKernel::free_part(GraphPoint x, GraphPoint y) const {
    if (x.edge != y.edge) return 0.0;
    return I_UNIT / (2.0 * k_) * std::exp(I_UNIT * k_ * std::abs(x.x - y.x));
}

cplx ResolventKernel::entry(GraphPoint x, GraphPoint y) const {
    const cplx r1 = profile(x).transpose() * M_ * profile(y);
    return free_part(x, y) + I_UNIT / (2.0 * k_) * r1;
}

cplx ResolventKernel::entry_dx(GraphPoint x, GraphPoint y) const {
    cplx r0 = 0.0;
    if (x.edge == y.edge && x.x != y.x) {
        const double sgn = x.x > y.x ? 1.0 : -1.0;
        r0 = -0.5 * sgn * std::exp(I_UNIT * k_ * std::abs(x.x - y.x));
    }
    const cplx r1 = profile_dx(x).transpose() * M_ * profile(y);
    return r0 + I_UNIT / (2.0 * k_) * r1;
}

Matrix ResolventKernel::matrix(const Eigen::VectorXd& x, const Eigen::VectorXd& y) const {
    const int n = sys_.graph().num_edges();
    if (x.size() != n || y.size() != n) throw Error("resolvent kernel: one position per edge");
    Matrix r(n, n);
    for (int j = 0; j < n; ++j)
        for (int jp = 0; jp < n; ++jp) r(j, jp) = entry({j, x(j)}, {jp, y(jp)});
    return r;
}

namespace {

double edge_scale(const MetricGraph& g, int edge, double external_extent) {
    const int ne = g.num_external();
    if (edge < ne) return external_extent;
    return g.internal_edges()[static_cast<std::size_t>(edge - ne)].length;
}

struct Bump {
    int edge;
    double centre;
    double width;
    double operator()(double y) const {
        const double t = (y - centre) / width;
        if (std::abs(t) >= 1.0) return 0.0;
        const double s = 1.0 - t * t;
        return s * s * s;
    }
};

class Quadrature {
public:
    explicit Quadrature(int n) { gauss_legendre(n, nodes_, weights_); }

    // Integral over [lo, hi] of f, split at the given interior points.
    template <class F>
    cplx integrate(F&& f, double lo, double hi, std::vector<double> cuts) const {
        cuts.push_back(lo);
        cuts.push_back(hi);
        std::sort(cuts.begin(), cuts.end());
        cplx total = 0.0;
        for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
            const double a = std::max(lo, cuts[s]), b = std::min(hi, cuts[s + 1]);
            if (b <= a) continue;
            const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
            for (Eigen::Index q = 0; q < nodes_.size(); ++q)
                total += weights_(q) * half * f(mid + half * nodes_(q));
        }
        return total;
    }

private:
    Eigen::VectorXd nodes_, weights_;
};

cplx apply_kernel(const ResolventKernel& res, const Quadrature& quad, const Bump& phi,
                  GraphPoint x, bool derivative) {
    std::vector<double> cuts{phi.centre};
    if (x.edge == phi.edge && std::abs(x.x - phi.centre) < phi.width) cuts.push_back(x.x);
    auto f = [&](double y) {
        const GraphPoint yp{phi.edge, y};
        return (derivative ? res.entry_dx(x, yp) : res.entry(x, yp)) * phi(y);
    };
    return quad.integrate(f, phi.centre - phi.width, phi.centre + phi.width, cuts);
}

struct Traces {
    Vector psi, dpsi;
};

Traces boundary_traces(const ResolventKernel& res, const Quadrature& quad, const Bump& phi) {
    const MetricGraph& g = res.system().graph();
    const int ne = g.num_external(), ni = g.num_internal();
    Traces t{Vector::Zero(g.dim()), Vector::Zero(g.dim())};
    for (int e = 0; e < ne; ++e) {
        t.psi(e) = apply_kernel(res, quad, phi, {e, 0.0}, false);
        t.dpsi(e) = apply_kernel(res, quad, phi, {e, 0.0}, true);
    }
    for (int i = 0; i < ni; ++i) {
        const double a = g.internal_edges()[static_cast<std::size_t>(i)].length;
        const GraphPoint left{ne + i, 0.0}, right{ne + i, a};
        t.psi(ne + i) = apply_kernel(res, quad, phi, left, false);
        t.dpsi(ne + i) = apply_kernel(res, quad, phi, left, true);
        t.psi(ne + ni + i) = apply_kernel(res, quad, phi, right, false);
        t.dpsi(ne + ni + i) = -apply_kernel(res, quad, phi, right, true);
    }
    return t;
}

}  // namespace

ResolventIdentityReport verify_resolvent_identity(const ResolventKernel& res,
                                                  const ResolventCheckOptions& opts) {
    ResolventIdentityReport rep;
    const MetricGraph& g = res.system().graph();
    const BoundaryConditions& bc = res.system().bc();
    const int edges = g.num_edges();
    const cplx k = res.k();
    const Quadrature fine(opts.quadrature_nodes);
    const Quadrature coarse(std::max(4, opts.quadrature_nodes / 2));
    const double norm_a = spectral_norm(bc.A), norm_b = spectral_norm(bc.B);

    for (int jt = 0; jt < edges; ++jt) {
        const double len = edge_scale(g, jt, opts.external_extent);
        for (double frac : {0.3, 0.5, 0.7}) {
            const Bump phi{jt, frac * len, 0.1 * len};
            ++rep.test_functions;

            const Traces t = boundary_traces(res, fine, phi);
            const Traces tc = boundary_traces(res, coarse, phi);
            const double scale = norm_a * t.psi.norm() + norm_b * t.dpsi.norm();
            const double bc_res = (bc.A * t.psi + bc.B * t.dpsi).norm();
            rep.bc_residual = std::max(rep.bc_residual, scale > 0 ? bc_res / scale : bc_res);
            const double tr_scale = std::max(t.psi.norm() + t.dpsi.norm(), 1e-300);
            rep.quadrature_error = std::max(
                rep.quadrature_error, ((t.psi - tc.psi).norm() + (t.dpsi - tc.dpsi).norm()) / tr_scale);

            std::vector<GraphPoint> probes{{jt, phi.centre},
                                           {jt, phi.centre - 2.0 * phi.width},
                                           {jt, phi.centre + 2.0 * phi.width}};
            for (int j = 0; j < edges; ++j)
                if (j != jt) probes.push_back({j, 0.5 * edge_scale(g, j, opts.external_extent)});
            for (const GraphPoint& p : probes) {
                const double h = opts.fd_step * edge_scale(g, p.edge, opts.external_extent);
                auto psi = [&](double x) { return apply_kernel(res, fine, phi, {p.edge, x}, false); };
                const cplx c0 = psi(p.x);
                auto second = [&](double hh) {
                    return (psi(p.x + hh) - 2.0 * c0 + psi(p.x - hh)) / (hh * hh);
                };
                const cplx d2 = (4.0 * second(0.5 * h) - second(h)) / 3.0;
                const double src = p.edge == phi.edge ? phi(p.x) : 0.0;
                const double denom = 1.0 + std::abs(k * k * c0) + std::abs(d2);
                rep.ode_residual = std::max(rep.ode_residual, std::abs(-d2 - k * k * c0 - src) / denom);
            }
        }
    }

    NumericOptions no;
    const ResolventKernel adj(SecularSystem(g, adjoint(bc, no)), -std::conj(k));
    std::mt19937 rng(opts.seed);
    std::uniform_real_distribution<double> unit(0.05, 0.95);
    double worst = 0.0, magnitude = 0.0;
    for (int s = 0; s < opts.symmetry_pairs; ++s) {
        for (int j = 0; j < edges; ++j) {
            for (int jp = 0; jp < edges; ++jp) {
                const GraphPoint x{j, unit(rng) * edge_scale(g, j, opts.external_extent)};
                const GraphPoint y{jp, unit(rng) * edge_scale(g, jp, opts.external_extent)};
                const cplx lhs = std::conj(res.entry(y, x));
                const cplx rhs = adj.entry(x, y);
                worst = std::max(worst, std::abs(lhs - rhs));
                magnitude = std::max({magnitude, std::abs(lhs), std::abs(rhs)});
                ++rep.symmetry_samples;
            }
        }
    }
    rep.symmetry_residual = magnitude > 0 ? worst / magnitude : worst;
    rep.passed = rep.bc_residual <= opts.tolerance && rep.ode_residual <= opts.tolerance &&
                 rep.symmetry_residual <= opts.tolerance && rep.quadrature_error <= opts.tolerance;
    return rep;
}

Matrix profile_gram(const SecularSystem& sys, cplx k) {
    const MetricGraph& g = sys.graph();
    const int ne = g.num_external(), ni = g.num_internal();
    const double kappa = k.imag();
    if (ne > 0 && kappa <= 0.0)
        throw Error("profile_gram: external edges need Im k > 0 for square integrability");
    Matrix gram = Matrix::Zero(g.dim(), g.dim());
    for (int e = 0; e < ne; ++e) gram(e, e) = 1.0 / (2.0 * kappa);
    for (int i = 0; i < ni; ++i) {
        const double a = g.internal_edges()[static_cast<std::size_t>(i)].length;
        const int l = ne + i, r = ne + ni + i;
        const cplx diag = integral_exp(cplx{-2.0 * kappa, 0.0}, a);
        gram(l, l) = diag;
        gram(r, r) = diag;
        const cplx off = std::exp(-I_UNIT * std::conj(k) * a) * integral_exp(cplx{0.0, 2.0 * k.real()}, a);
        gram(l, r) = off;
        gram(r, l) = std::conj(off);
    }
    return gram;
}

namespace {

double hs_of_middle(const SecularSystem& sys, cplx k, const Matrix& d) {
    const Matrix gram = profile_gram(sys, k);
    const cplx t = (d * gram * d.adjoint() * gram.conjugate()).trace();
    return std::sqrt(std::max(0.0, t.real())) / (2.0 * std::abs(k));
}

}  // namespace

double hs_distance(const ResolventKernel& a, const ResolventKernel& b) {
    const MetricGraph& ga = a.system().graph();
    const MetricGraph& gb = b.system().graph();
    if (ga.num_external() != gb.num_external() || ga.num_internal() != gb.num_internal() ||
        (ga.lengths() - gb.lengths()).norm() > 0.0)
        throw Error("hs_distance: kernels live on different graphs");
    if (std::abs(a.k() - b.k()) > 1e-14 * (1.0 + std::abs(a.k())))
        throw Error("hs_distance: kernels are evaluated at different k");
    return hs_of_middle(a.system(), a.k(), a.middle() - b.middle());
}

double hs_norm_boundary_part(const ResolventKernel& r) {
    return hs_of_middle(r.system(), r.k(), r.middle());
}

std::vector<SingularityProbe> singularity_profile(const SecularSystem& sys, double k) {
    std::vector<SingularityProbe> out;
    const int d = sys.dim();
    for (int j = 1; j <= 6; ++j) {
        SingularityProbe p;
        p.epsilon = std::pow(10.0, -j);
        const cplx kk{k, p.epsilon};
        // M = [1 - S T]^{-1} S = -W^{-1} (A - ikB) with W = (A + ikB) + (A - ikB) T,
        // which stays defined where A + ikB is singular.
        const Matrix minus = sys.bc().A - I_UNIT * kk * sys.bc().B;
        const Matrix w = sys.bc().A + I_UNIT * kk * sys.bc().B + minus * sys.T(kk);
        const Eigen::JacobiSVD<Matrix> svd(w, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const double smin = svd.singularValues()(d - 1);
        p.middle_norm = smin > 0.0 ? spectral_norm(svd.solve(minus)) : std::numeric_limits<double>::infinity();
        out.push_back(p);
    }
    return out;
}

std::string kernel_grid_csv(const ResolventKernel& res, int j, int jp, int n,
                            double external_extent) {
    if (n < 2) throw Error("kernel_grid_csv: need at least two samples per axis");
    const MetricGraph& g = res.system().graph();
    if (j < 0 || jp < 0 || j >= g.num_edges() || jp >= g.num_edges())
        throw Error("kernel_grid_csv: edge out of range");
    const double lx = edge_scale(g, j, external_extent), ly = edge_scale(g, jp, external_extent);
    std::ostringstream out;
    out << std::setprecision(17) << "x,y,re,im\n";
    for (int a = 0; a < n; ++a) {
        const double x = lx * a / (n - 1);
        for (int b = 0; b < n; ++b) {
            const double y = ly * b / (n - 1);
            const cplx r = res.entry({j, x}, {jp, y});
            out << x << ',' << y << ',' << r.real() << ',' << r.imag() << '\n';
        }
    }
    return out.str();
}

}  // namespace qgraph
