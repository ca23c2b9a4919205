#include "qgraph/secular.hpp"

#include <cmath>
#include <limits>

namespace qgraph {

SecularSystem::SecularSystem(MetricGraph g, BoundaryConditions bc)
    : graph_(std::move(g)), bc_(std::move(bc)), a_(graph_.lengths()) {
    if (bc_.dim() != graph_.dim()) {
        throw Error("boundary conditions have size " + std::to_string(bc_.dim()) +
                    " but the graph has d = " + std::to_string(graph_.dim()));
    }
}

Matrix SecularSystem::X(cplx k) const {
    const int d = dim(), ne = graph_.num_external(), ni = graph_.num_internal();
    Matrix x = Matrix::Zero(d, d);
    for (int e = 0; e < ne; ++e) x(e, e) = 1.0;
    for (int i = 0; i < ni; ++i) {
        const int l = ne + i, r = ne + ni + i;
        const cplx ep = std::exp(I_UNIT * k * a_(i));
        x(l, l) = 1.0;
        x(l, r) = 1.0;
        x(r, l) = ep;
        x(r, r) = 1.0 / ep;
    }
    return x;
}

Matrix SecularSystem::Y(cplx k) const {
    const int d = dim(), ne = graph_.num_external(), ni = graph_.num_internal();
    Matrix y = Matrix::Zero(d, d);
    for (int e = 0; e < ne; ++e) y(e, e) = 1.0;
    for (int i = 0; i < ni; ++i) {
        const int l = ne + i, r = ne + ni + i;
        const cplx ep = std::exp(I_UNIT * k * a_(i));
        y(l, l) = 1.0;
        y(l, r) = -1.0;
        y(r, l) = -ep;
        y(r, r) = 1.0 / ep;
    }
    return y;
}

Matrix SecularSystem::Z(cplx k) const {
    return bc_.A * X(k) + (I_UNIT * k) * (bc_.B * Y(k));
}

Matrix SecularSystem::Z_scaled(cplx k) const {
    const int d = dim(), ne = graph_.num_external(), ni = graph_.num_internal();
    Matrix xs = Matrix::Zero(d, d);
    Matrix ys = Matrix::Zero(d, d);
    for (int e = 0; e < ne; ++e) {
        xs(e, e) = 1.0;
        ys(e, e) = 1.0;
    }
    for (int i = 0; i < ni; ++i) {
        const int l = ne + i, r = ne + ni + i;
        const cplx ep = std::exp(I_UNIT * k * a_(i));
        xs(l, l) = 1.0;
        xs(l, r) = ep;
        xs(r, l) = ep;
        xs(r, r) = 1.0;
        ys(l, l) = 1.0;
        ys(l, r) = -ep;
        ys(r, l) = -ep;
        ys(r, r) = 1.0;
    }
    return bc_.A * xs + (I_UNIT * k) * (bc_.B * ys);
}

Matrix SecularSystem::dZ(cplx k) const {
    const int d = dim(), ne = graph_.num_external(), ni = graph_.num_internal();
    Matrix dx = Matrix::Zero(d, d);
    Matrix dy = Matrix::Zero(d, d);
    for (int i = 0; i < ni; ++i) {
        const int l = ne + i, r = ne + ni + i;
        const cplx ep = std::exp(I_UNIT * k * a_(i));
        const cplx ia = I_UNIT * a_(i);
        dx(r, l) = ia * ep;
        dx(r, r) = -ia / ep;
        dy(r, l) = -ia * ep;
        dy(r, r) = -ia / ep;
    }
    return bc_.A * dx + I_UNIT * (bc_.B * Y(k)) + (I_UNIT * k) * (bc_.B * dy);
}

Matrix SecularSystem::T(cplx k) const {
    const int d = dim(), ne = graph_.num_external(), ni = graph_.num_internal();
    Matrix t = Matrix::Zero(d, d);
    for (int i = 0; i < ni; ++i) {
        const cplx ep = std::exp(I_UNIT * k * a_(i));
        t(ne + i, ne + ni + i) = ep;
        t(ne + ni + i, ne + i) = ep;
    }
    return t;
}

Matrix SecularSystem::R_plus(cplx k) const {
    const int d = dim(), ne = graph_.num_external(), ni = graph_.num_internal();
    Matrix r = Matrix::Identity(d, d);
    for (int i = 0; i < ni; ++i) r(ne + ni + i, ne + ni + i) = std::exp(-I_UNIT * k * a_(i));
    return r;
}

Matrix SecularSystem::R_plus_inverse(cplx k) const {
    const int d = dim(), ne = graph_.num_external(), ni = graph_.num_internal();
    Matrix r = Matrix::Identity(d, d);
    for (int i = 0; i < ni; ++i) r(ne + ni + i, ne + ni + i) = std::exp(I_UNIT * k * a_(i));
    return r;
}

Matrix SecularSystem::Phi(const Eigen::VectorXd& x, cplx k) const {
    const int ne = graph_.num_external(), ni = graph_.num_internal();
    if (x.size() != ne + ni) throw Error("Phi: expected one position per edge");
    Matrix phi = Matrix::Zero(ne + ni, dim());
    for (int e = 0; e < ne; ++e) phi(e, e) = std::exp(I_UNIT * k * x(e));
    for (int i = 0; i < ni; ++i) {
        phi(ne + i, ne + i) = std::exp(I_UNIT * k * x(ne + i));
        phi(ne + i, ne + ni + i) = std::exp(-I_UNIT * k * x(ne + i));
    }
    return phi;
}

Matrix SecularSystem::X0() const {
    const int d = dim(), ne = graph_.num_external(), ni = graph_.num_internal();
    Matrix x = Matrix::Zero(d, d);
    for (int i = 0; i < ni; ++i) {
        const int l = ne + i, r = ne + ni + i;
        x(l, l) = 1.0;
        x(r, l) = 1.0;
        x(r, r) = a_(i);
    }
    return x;
}

Matrix SecularSystem::Y0() const {
    const int d = dim(), ne = graph_.num_external(), ni = graph_.num_internal();
    Matrix y = Matrix::Zero(d, d);
    for (int i = 0; i < ni; ++i) {
        const int l = ne + i, r = ne + ni + i;
        y(l, r) = 1.0;
        y(r, r) = -1.0;
    }
    return y;
}

Matrix SecularSystem::zero_mode_matrix() const {
    const int ne = graph_.num_external(), ni = graph_.num_internal();
    const Matrix full = bc_.A * X0() + bc_.B * Y0();
    return full.middleCols(ne, 2 * ni);
}

LogDet log_det(const Matrix& m) {
    LogDet out;
    if (m.rows() == 0) return out;
    Eigen::PartialPivLU<Matrix> lu(m);
    const Matrix& u = lu.matrixLU();
    cplx acc{0.0, 0.0};
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        const cplx di = u(i, i);
        if (di == cplx{0.0, 0.0}) {
            out.singular = true;
            out.value = {-std::numeric_limits<double>::infinity(), 0.0};
            return out;
        }
        acc += std::log(di);
    }
    if (lu.permutationP().determinant() < 0) acc += cplx{0.0, M_PI};
    out.value = {acc.real(), std::remainder(acc.imag(), 2.0 * M_PI)};
    return out;
}

LogDet SecularSystem::log_det_Z(cplx k) const {
    LogDet out = log_det(Z_scaled(k));
    if (out.singular) return out;
    // det R_+ = exp(-ik sum a_i)
    const cplx shift = -I_UNIT * k * a_.sum();
    out.value += shift;
    out.value.imag(std::remainder(out.value.imag(), 2.0 * M_PI));
    return out;
}

cplx SecularSystem::dlog_det_Z(cplx k) const {
    // tr(Z^{-1} Z') with Z = Zs R_+ and R_+ diagonal, so Z^{-1} Z' =
    // R_+^{-1} Zs^{-1} Z'; the trace is invariant under the similarity.
    Eigen::PartialPivLU<Matrix> lu(Z_scaled(k));
    return lu.solve(dZ(k) * R_plus_inverse(k)).trace();
}

double SecularSystem::factorization_residual(cplx k) const {
    const int d = dim();
    const Matrix S = cayley(bc_, k);
    const Matrix rhs = (bc_.A + I_UNIT * k * bc_.B) * (Matrix::Identity(d, d) - S * T(k)) * R_plus(k);
    return (Z(k) - rhs).norm();
}

}  // namespace qgraph
