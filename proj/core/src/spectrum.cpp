#include "qgraph/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgraph {

std::string to_string(PointStatus s) {
    switch (s) {
        case PointStatus::Eigenvalue: return "eigenvalue";
        case PointStatus::RealKCandidate: return "real_k_candidate";
        case PointStatus::SpectralSingularityCandidate: return "spectral_singularity_candidate";
        case PointStatus::ZeroMode: return "zero_mode";
    }
    return "unknown";
}

std::string to_string(EssentialSpectrum e) {
    switch (e) {
        case EssentialSpectrum::Empty: return "empty";
        case EssentialSpectrum::HalfLine: return "half_line";
        case EssentialSpectrum::WholePlane: return "whole_plane";
        case EssentialSpectrum::UndefinedIrregular: return "undefined_irregular";
    }
    return "unknown";
}

namespace {

struct KernelAnalysis {
    int nullity = 0;
    double gap = 0.0;
    double rel_sigma_min = 0.0;
    Matrix coefficients;  // d x nullity, columns solve Z c = 0
};

KernelAnalysis analyse_kernel(const SecularSystem& sys, cplx k, double rel_tol, double rank_factor) {
    KernelAnalysis out;
    const Matrix zs = sys.Z_scaled(k);
    Eigen::JacobiSVD<Matrix> svd(zs, Eigen::ComputeFullV);
    const Eigen::VectorXd& sv = svd.singularValues();
    const Eigen::Index d = sv.size();
    const double smax = sv(0);
    const double thr = std::max(rank_threshold(zs, rank_factor), rel_tol * smax);
    for (Eigen::Index i = 0; i < d; ++i)
        if (sv(i) <= thr) ++out.nullity;
    out.rel_sigma_min = smax > 0 ? sv(d - 1) / smax : 0.0;
    const Eigen::Index kept = d - out.nullity;
    if (out.nullity == 0 || kept == 0) {
        out.gap = std::numeric_limits<double>::infinity();
    } else {
        const double dropped = sv(kept);
        out.gap = dropped > 0 ? sv(kept - 1) / dropped : std::numeric_limits<double>::infinity();
    }
    out.coefficients = sys.R_plus_inverse(k) * svd.matrixV().rightCols(out.nullity);
    return out;
}

// Columns of c whose combinations have vanishing external block.
Matrix internal_only_kernel(const Matrix& c, int ne, double rank_factor) {
    if (ne == 0 || c.cols() == 0) return c;
    const Matrix n = nullspace(c.topRows(ne), rank_factor);
    if (n.cols() == 0) return Matrix(c.rows(), 0);
    const Matrix sub = c * n;
    Eigen::HouseholderQR<Matrix> qr(sub);
    return qr.householderQ() * Matrix::Identity(sub.rows(), sub.cols());
}

HolomorphicFunction det_function(const SecularSystem& sys) {
    return {[&sys](cplx k) { return sys.log_det_Z(k); },
            [&sys](cplx k) { return sys.dlog_det_Z(k); }};
}

// det Z is an exponential polynomial with frequencies up to twice the total
// length, so contour sampling must scale with it to avoid phase aliasing.
RootOptions tuned(const RootOptions& base, const SecularSystem& sys) {
    RootOptions r = base;
    r.samples_per_unit = std::max(r.samples_per_unit, 6.0 * sys.graph().total_length());
    return r;
}

double effective_im_max(const SecularSystem& sys, double im_max) {
    const double amax = sys.graph().max_length();
    if (amax > 0.0) im_max = std::min(im_max, 600.0 / amax);
    return im_max;
}

void classify_roots(const SecularSystem& sys, const RootSearch& search, const SpectrumOptions& opts,
                    bool keep_upper, std::vector<SpectralPoint>& out, SolverDiagnostics* diag) {
    const int ne = sys.graph().num_external();
    const int ni = sys.graph().num_internal();
    for (const Root& root : search.roots) {
        const cplx k = root.z;
        const double scale = 1.0 + std::abs(k);
        if (std::abs(k) < opts.k_min) {
            if (diag) diag->dropped_origin += root.multiplicity;
            continue;
        }
        const bool real = std::abs(k.imag()) <= opts.real_tol * scale;
        if ((real && k.real() < 0.0) || (!real && k.imag() < 0.0)) {
            if (diag) diag->dropped_negative += root.multiplicity;
            continue;
        }
        if (!real && !keep_upper) continue;

        SpectralPoint p;
        p.k = real ? cplx{k.real(), 0.0} : k;
        p.lambda = p.k * p.k;
        p.winding_multiplicity = root.multiplicity;
        const KernelAnalysis ka = analyse_kernel(sys, p.k, opts.geometric_rel_tol, opts.rank_factor);
        p.geometric_multiplicity = ka.nullity;
        p.singular_value_gap = ka.gap;
        p.relative_sigma_min = ka.rel_sigma_min;
        p.status = PointStatus::Eigenvalue;
        if (real) {
            if (ne == 0) {
                p.status = PointStatus::Eigenvalue;
            } else if (ni == 0) {
                p.status = PointStatus::SpectralSingularityCandidate;
            } else {
                const Matrix inner = internal_only_kernel(ka.coefficients, ne, opts.rank_factor);
                if (inner.cols() > 0) {
                    p.status = PointStatus::Eigenvalue;
                    p.geometric_multiplicity = static_cast<int>(inner.cols());
                } else {
                    p.status = PointStatus::RealKCandidate;
                }
            }
        }
        out.push_back(p);
    }
}

void sort_points(std::vector<SpectralPoint>& pts) {
    std::sort(pts.begin(), pts.end(), [](const SpectralPoint& a, const SpectralPoint& b) {
        if (a.k.real() != b.k.real()) return a.k.real() < b.k.real();
        return a.k.imag() < b.k.imag();
    });
}

void require_regular(const SecularSystem& sys, const SpectrumOptions& opts) {
    if (opts.allow_irregular) return;
    NumericOptions no;
    no.rank_factor = opts.rank_factor;
    if (!is_regular(sys.bc(), no).regular)
        throw IrregularError("irregular boundary conditions; root finding refused");
}

void absorb(SolverDiagnostics* diag, const RootSearch& s) {
    if (!diag) return;
    diag->boundary_winding += s.boundary_winding;
    diag->multiplicity_sum += s.multiplicity_sum;
    diag->evaluations += s.evaluations;
    diag->boxes += s.boxes;
    diag->complete = diag->complete && s.complete;
    diag->warnings.insert(diag->warnings.end(), s.warnings.begin(), s.warnings.end());
}

}  // namespace

std::vector<SpectralPoint> find_eigenvalues(const SecularSystem& sys, const SpectrumOptions& opts,
                                            SolverDiagnostics* diag) {
    require_regular(sys, opts);
    const double re_min = opts.re_min.value_or(-opts.re_max);
    const double im_max = effective_im_max(sys, opts.im_max);
    const double eta = std::min(opts.band, 0.25 * im_max);
    const HolomorphicFunction f = det_function(sys);

    SolverDiagnostics local;
    SolverDiagnostics* dg = diag ? diag : &local;
    *dg = SolverDiagnostics{};
    dg->complete = true;

    const RootOptions ro = tuned(opts.roots, sys);
    const RootSearch band = find_roots(f, Rect{re_min, opts.re_max, -eta, eta}, ro);
    const RootSearch upper = find_roots(f, Rect{re_min, opts.re_max, eta, im_max}, ro);
    dg->band_region = band.region;
    dg->upper_region = upper.region;
    absorb(dg, band);
    absorb(dg, upper);

    std::vector<SpectralPoint> pts;
    classify_roots(sys, band, opts, true, pts, dg);
    classify_roots(sys, upper, opts, true, pts, dg);
    sort_points(pts);
    return pts;
}

std::vector<SpectralPoint> real_axis_scan(const SecularSystem& sys, double k_max,
                                          const SpectrumOptions& opts) {
    require_regular(sys, opts);
    const double eta = std::min(opts.band, 0.25 * effective_im_max(sys, opts.im_max));
    const RootSearch band =
        find_roots(det_function(sys), Rect{-0.25, k_max, -eta, eta}, tuned(opts.roots, sys));
    std::vector<SpectralPoint> pts;
    classify_roots(sys, band, opts, false, pts, nullptr);
    sort_points(pts);
    return pts;
}

std::optional<SpectralPoint> zero_mode(const SecularSystem& sys, double rank_factor) {
    if (sys.graph().num_internal() == 0) return std::nullopt;
    const Matrix m0 = sys.zero_mode_matrix();
    const RankInfo ri = numerical_rank(m0, rank_factor);
    const int dim = static_cast<int>(m0.cols()) - ri.rank;
    if (dim <= 0) return std::nullopt;
    SpectralPoint p;
    p.k = 0.0;
    p.lambda = 0.0;
    p.geometric_multiplicity = dim;
    p.winding_multiplicity = dim;
    p.status = PointStatus::ZeroMode;
    p.singular_value_gap = ri.gap;
    return p;
}

std::vector<Eigenfunction> eigenfunction(const SecularSystem& sys, const SpectralPoint& point,
                                         double rank_factor) {
    const int ne = sys.graph().num_external();
    const int ni = sys.graph().num_internal();
    std::vector<Eigenfunction> out;
    auto normalise = [](Vector c) {
        Eigen::Index idx = 0;
        c.cwiseAbs().maxCoeff(&idx);
        const cplx ph = c(idx) / std::abs(c(idx));
        return Vector(c / (ph * c.norm()));
    };

    if (point.status == PointStatus::ZeroMode) {
        const Matrix m0 = sys.zero_mode_matrix();
        const Matrix n = nullspace(m0, rank_factor);
        for (Eigen::Index j = 0; j < n.cols(); ++j) {
            const Vector c = normalise(n.col(j));
            Eigenfunction ef;
            ef.k = 0.0;
            ef.zero_mode = true;
            ef.s = Vector::Zero(ne);
            ef.alpha = c.head(ni);
            ef.beta = c.tail(ni);
            ef.bc_residual = (m0 * c).norm();
            out.push_back(ef);
        }
        return out;
    }
    if (point.status != PointStatus::Eigenvalue)
        throw Error("eigenfunction: point is not an eigenvalue (" + to_string(point.status) + ")");

    const KernelAnalysis ka = analyse_kernel(sys, point.k, 1e-8, rank_factor);
    Matrix c = ka.coefficients;
    const bool real = point.k.imag() == 0.0;
    if (real && ne > 0) c = internal_only_kernel(c, ne, rank_factor);
    const Matrix z = sys.Z(point.k);
    for (Eigen::Index j = 0; j < c.cols(); ++j) {
        const Vector v = normalise(c.col(j));
        Eigenfunction ef;
        ef.k = point.k;
        ef.s = v.head(ne);
        ef.alpha = v.segment(ne, ni);
        ef.beta = v.tail(ni);
        ef.bc_residual = (z * v).norm();
        out.push_back(ef);
    }
    return out;
}

std::vector<double> residual_spectrum(const SecularSystem& sys, double k_max,
                                      const SpectrumOptions& opts) {
    std::vector<double> out;
    if (sys.graph().num_external() == 0 || sys.graph().num_internal() == 0) return out;
    NumericOptions no;
    no.rank_factor = opts.rank_factor;
    const SecularSystem adj(sys.graph(), adjoint(sys.bc(), no));

    const auto orig = real_axis_scan(sys, k_max, opts);
    const auto dual = real_axis_scan(adj, k_max, opts);
    for (const auto& p : dual) {
        if (p.status != PointStatus::Eigenvalue) continue;
        const bool shared = std::any_of(orig.begin(), orig.end(), [&](const SpectralPoint& q) {
            return q.status == PointStatus::Eigenvalue &&
                   std::abs(q.k - p.k) <= 1e-7 * (1.0 + std::abs(p.k));
        });
        if (!shared) out.push_back(p.lambda.real());
    }
    if (zero_mode(adj, opts.rank_factor) && !zero_mode(sys, opts.rank_factor)) out.push_back(0.0);
    std::sort(out.begin(), out.end());
    return out;
}

EssentialSpectrum essential_spectrum(const Classification& c, const MetricGraph& g) {
    if (c.dim_M != c.d) return EssentialSpectrum::WholePlane;
    if (!c.regular) return EssentialSpectrum::UndefinedIrregular;
    return g.compact() ? EssentialSpectrum::Empty : EssentialSpectrum::HalfLine;
}

bool det_vanishes_identically(const SecularSystem& sys, double rank_factor) {
    static const cplx samples[] = {{0.7, 0.3}, {1.9, 1.1}, {-1.3, 0.6}, {0.0, 2.6}, {3.1, 0.45}};
    for (cplx k : samples) {
        const Matrix zs = sys.Z_scaled(k);
        if (numerical_rank(zs, rank_factor).rank == zs.rows()) return false;
    }
    return true;
}

WeylReport weyl_count_check(const std::vector<SpectralPoint>& points, double total_length,
                            int max_points, double rel_tol) {
    std::vector<double> ks;
    for (const auto& p : points) {
        if (p.status != PointStatus::Eigenvalue && p.status != PointStatus::ZeroMode) continue;
        for (int m = 0; m < p.winding_multiplicity; ++m) ks.push_back(std::sqrt(std::abs(p.lambda)));
    }
    std::sort(ks.begin(), ks.end());
    if (static_cast<int>(ks.size()) > max_points) ks.resize(static_cast<std::size_t>(max_points));
    if (ks.size() < 10) throw Error("weyl_count_check: fewer than 10 eigenvalues");

    const double n = static_cast<double>(ks.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        const double x = ks[j], y = static_cast<double>(j + 1);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    WeylReport r;
    r.count = static_cast<int>(ks.size());
    r.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    r.intercept = (sy - r.slope * sx) / n;
    r.expected_slope = total_length / M_PI;
    r.relative_error = std::abs(r.slope - r.expected_slope) / r.expected_slope;
    r.within_tolerance = r.relative_error <= rel_tol;
    return r;
}

AdjointPairingReport check_adjoint_pairing(const SecularSystem& sys,
                                           const std::vector<SpectralPoint>& points, double tol) {
    AdjointPairingReport r;
    const SecularSystem adj(sys.graph(), adjoint(sys.bc()));
    for (const auto& p : points) {
        if (p.status != PointStatus::Eigenvalue || p.k.imag() <= 0.0) continue;
        const cplx kk = -std::conj(p.k);
        const Matrix zs = adj.Z_scaled(kk);
        Eigen::JacobiSVD<Matrix> svd(zs);
        const auto& sv = svd.singularValues();
        const double rel = sv(sv.size() - 1) / sv(0);
        ++r.checked;
        r.worst = std::max(r.worst, rel);
        if (rel > tol) ++r.failures;
    }
    return r;
}

}  // namespace qgraph
