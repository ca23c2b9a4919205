#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qgraph {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr cplx I_UNIT{0.0, 1.0};

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A matrix that had to be inverted was numerically singular.
class SingularError : public Error {
public:
    using Error::Error;
};

// Default multiplier applied to max(rows, cols) * eps * sigma_max.
inline constexpr double kDefaultRankFactor = 1e3;

struct RankInfo {
    int rank = 0;
    double threshold = 0.0;  // singular values <= threshold count as zero
    double sigma_max = 0.0;
    // Smallest kept singular value over largest dropped one (inf when nothing
    // is dropped or nothing is kept). Large values mean a confident decision.
    double gap = 0.0;
};

double rank_threshold(const Matrix& m, double factor = kDefaultRankFactor);
RankInfo numerical_rank(const Matrix& m, double factor = kDefaultRankFactor);

// Orthonormal basis of the kernel (columns).
Matrix nullspace(const Matrix& m, double factor = kDefaultRankFactor);

// Orthonormal basis of the column space.
Matrix range_basis(const Matrix& m, double factor = kDefaultRankFactor);

// Orthogonal projector Q Q* for a matrix Q with orthonormal columns.
Matrix projector_from_basis(const Matrix& q, Eigen::Index n);

double spectral_norm(const Matrix& m);

// 2-norm condition number; infinity for exactly singular input.
double condition_number(const Matrix& m);

// Moore-Penrose pseudo-inverse with the same rank threshold convention.
Matrix pseudo_inverse(const Matrix& m, double factor = kDefaultRankFactor);

// Integral of exp(c x) over [0, a], accurate for small |c a|.
cplx integral_exp(cplx c, double a);

// exp(z) - 1 without cancellation for small |z|.
cplx expm1_complex(cplx z);

}  // namespace qgraph
