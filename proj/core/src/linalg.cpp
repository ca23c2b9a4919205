#include "qgraph/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qgraph {

namespace {

Eigen::JacobiSVD<Matrix> full_svd(const Matrix& m) {
    return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

double threshold_from(const Eigen::VectorXd& sv, Eigen::Index rows, Eigen::Index cols,
                      double factor) {
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    return static_cast<double>(std::max(rows, cols)) * std::numeric_limits<double>::epsilon() *
           smax * factor;
}

int count_above(const Eigen::VectorXd& sv, double thr) {
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thr) ++r;
    return r;
}

}  // namespace

double rank_threshold(const Matrix& m, double factor) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return threshold_from(svd.singularValues(), m.rows(), m.cols(), factor);
}

RankInfo numerical_rank(const Matrix& m, double factor) {
    RankInfo info;
    if (m.size() == 0) return info;
    Eigen::JacobiSVD<Matrix> svd(m);
    const Eigen::VectorXd& sv = svd.singularValues();
    info.sigma_max = sv(0);
    info.threshold = threshold_from(sv, m.rows(), m.cols(), factor);
    info.rank = count_above(sv, info.threshold);
    const double inf = std::numeric_limits<double>::infinity();
    if (info.rank == 0 || info.rank == sv.size()) {
        info.gap = inf;
    } else {
        const double dropped = sv(info.rank);
        info.gap = dropped > 0 ? sv(info.rank - 1) / dropped : inf;
    }
    return info;
}

Matrix nullspace(const Matrix& m, double factor) {
    if (m.cols() == 0) return Matrix(0, 0);
    if (m.rows() == 0) return Matrix::Identity(m.cols(), m.cols());
    auto svd = full_svd(m);
    const auto& sv = svd.singularValues();
    const int r = count_above(sv, threshold_from(sv, m.rows(), m.cols(), factor));
    return svd.matrixV().rightCols(m.cols() - r);
}

Matrix range_basis(const Matrix& m, double factor) {
    if (m.size() == 0) return Matrix(m.rows(), 0);
    auto svd = full_svd(m);
    const auto& sv = svd.singularValues();
    const int r = count_above(sv, threshold_from(sv, m.rows(), m.cols(), factor));
    return svd.matrixU().leftCols(r);
}

Matrix projector_from_basis(const Matrix& q, Eigen::Index n) {
    if (q.cols() == 0) return Matrix::Zero(n, n);
    return q * q.adjoint();
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    return svd.singularValues()(0);
}

double condition_number(const Matrix& m) {
    if (m.size() == 0) return 1.0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (smin == 0.0) return std::numeric_limits<double>::infinity();
    return sv(0) / smin;
}

Matrix pseudo_inverse(const Matrix& m, double factor) {
    if (m.size() == 0) return Matrix(m.cols(), m.rows());
    auto svd = full_svd(m);
    const auto& sv = svd.singularValues();
    const double thr = threshold_from(sv, m.rows(), m.cols(), factor);
    Matrix sinv = Matrix::Zero(m.cols(), m.rows());
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > thr) sinv(i, i) = 1.0 / sv(i);
    return svd.matrixV() * sinv * svd.matrixU().adjoint();
}

cplx expm1_complex(cplx z) {
    const double x = z.real();
    const double y = z.imag();
    const double s = std::sin(0.5 * y);
    // cos(y) - 1 = -2 sin^2(y/2)
    const double re = std::expm1(x) * std::cos(y) - 2.0 * s * s;
    const double im = std::exp(x) * std::sin(y);
    return {re, im};
}

cplx integral_exp(cplx c, double a) {
    const cplx ca = c * a;
    if (std::abs(ca) < 1e-8) return a * (1.0 + 0.5 * ca + ca * ca / 6.0);
    return expm1_complex(ca) / c;
}

}  // namespace qgraph
