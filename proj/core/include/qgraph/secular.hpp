#pragma once

#include "qgraph/bcspace.hpp"
#include "qgraph/graph.hpp"

namespace qgraph {

struct LogDet {
    cplx value{0.0, 0.0};   // log|det| + i arg(det), principal branch
    bool singular = false;  // det is exactly zero (value.real() is -inf)
};

// k-parameterised matrices of the secular problem for one graph and one
// set of vertex conditions. The plane-wave Ansatz is
//   psi_e = s_e exp(ikx),  psi_i = alpha_i exp(ikx) + beta_i exp(-ikx),
// with unknowns ordered (s, alpha, beta).
class SecularSystem {
public:
    SecularSystem(MetricGraph g, BoundaryConditions bc);

    const MetricGraph& graph() const { return graph_; }
    const BoundaryConditions& bc() const { return bc_; }
    int dim() const { return graph_.dim(); }

    Matrix X(cplx k) const;
    Matrix Y(cplx k) const;
    Matrix Z(cplx k) const;
    // Z R_+^{-1} = (A + ikB)(1 - S T): bounded for Im k >= 0, same kernel up
    // to the column scaling R_+.
    Matrix Z_scaled(cplx k) const;
    // dZ/dk, exact.
    Matrix dZ(cplx k) const;
    Matrix T(cplx k) const;
    Matrix R_plus(cplx k) const;
    Matrix R_plus_inverse(cplx k) const;

    // Row j is edge j; x holds one position per edge row.
    Matrix Phi(const Eigen::VectorXd& x, cplx k) const;

    Matrix X0() const;
    Matrix Y0() const;

    LogDet log_det_Z(cplx k) const;
    // d/dk log det Z = tr(Z^{-1} Z').
    cplx dlog_det_Z(cplx k) const;

    // ||Z - (A + ikB)(1 - S T) R_+||_F.
    double factorization_residual(cplx k) const;

    // Columns alpha, beta of A X0 + B Y0 (d x 2|I|).
    Matrix zero_mode_matrix() const;

private:
    MetricGraph graph_;
    BoundaryConditions bc_;
    Eigen::VectorXd a_;
};

LogDet log_det(const Matrix& m);

}  // namespace qgraph
