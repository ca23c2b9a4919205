#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgraph/roots.hpp"
#include "qgraph/secular.hpp"

namespace qgraph {

class IrregularError : public Error {
public:
    using Error::Error;
};

enum class PointStatus { Eigenvalue, RealKCandidate, SpectralSingularityCandidate, ZeroMode };
std::string to_string(PointStatus s);

struct SpectralPoint {
    cplx k;
    cplx lambda;
    // Order of the zero of det Z (argument principle). For zero modes the
    // field repeats the kernel dimension since det Z(0) carries no
    // spectral information.
    int winding_multiplicity = 1;
    int geometric_multiplicity = 1;
    PointStatus status = PointStatus::Eigenvalue;
    double singular_value_gap = 0.0;  // smallest kept / largest dropped singular value
    double relative_sigma_min = 0.0;  // sigma_min / sigma_max of the scaled secular matrix
};

// psi_e = s_e exp(ikx) on external edges; alpha_i exp(ikx) + beta_i exp(-ikx)
// on internal edges. Zero modes use alpha_i + beta_i x instead.
struct Eigenfunction {
    cplx k;
    bool zero_mode = false;
    Vector s;
    Vector alpha;
    Vector beta;
    double bc_residual = 0.0;  // ||A psi + B psi'|| for unit coefficient norm
};

enum class EssentialSpectrum { Empty, HalfLine, WholePlane, UndefinedIrregular };
std::string to_string(EssentialSpectrum e);

struct SpectrumOptions {
    double re_max = 20.0;
    std::optional<double> re_min;  // defaults to -re_max
    double im_max = 20.0;
    double band = 0.05;            // half-height of the strip around the real axis
    double k_min = 1e-6;           // zeros with |k| below this are the k = 0 artefact
    double real_tol = 1e-9;        // |Im k| <= real_tol (1 + |k|) counts as real
    double geometric_rel_tol = 1e-8;
    double rank_factor = kDefaultRankFactor;
    bool allow_irregular = false;
    bool include_zero_mode = true;
    RootOptions roots;
};

struct SolverDiagnostics {
    Rect upper_region;
    Rect band_region;
    int boundary_winding = 0;   // including zeros that were filtered out
    int multiplicity_sum = 0;
    bool complete = false;
    long evaluations = 0;
    int boxes = 0;
    int dropped_origin = 0;     // multiplicity of the k = 0 artefact
    int dropped_negative = 0;   // multiplicity of zeros with Re k < 0 on the real axis or Im k < 0
    std::vector<std::string> warnings;
};

// Zeros of det Z in [re_min, re_max] x (-band, im_max] with Im k >= 0 and
// k != 0, tagged by status. Throws IrregularError unless the conditions are
// regular or opts.allow_irregular is set.
std::vector<SpectralPoint> find_eigenvalues(const SecularSystem& sys, const SpectrumOptions& opts,
                                            SolverDiagnostics* diag = nullptr);

// Zeros on (0, k_max] only.
std::vector<SpectralPoint> real_axis_scan(const SecularSystem& sys, double k_max,
                                          const SpectrumOptions& opts = {});

std::optional<SpectralPoint> zero_mode(const SecularSystem& sys,
                                       double rank_factor = kDefaultRankFactor);

std::vector<Eigenfunction> eigenfunction(const SecularSystem& sys, const SpectralPoint& point,
                                         double rank_factor = kDefaultRankFactor);

// Real lambda >= 0 with lambda an eigenvalue of the adjoint system but not of
// the original one, searched for k in (0, k_max] plus lambda = 0.
std::vector<double> residual_spectrum(const SecularSystem& sys, double k_max,
                                      const SpectrumOptions& opts = {});

EssentialSpectrum essential_spectrum(const Classification& c, const MetricGraph& g);

// det Z vanishes identically (sampled at several generic k).
bool det_vanishes_identically(const SecularSystem& sys, double rank_factor = kDefaultRankFactor);

struct WeylReport {
    int count = 0;
    double slope = 0.0;           // fitted d N / d k
    double expected_slope = 0.0;  // total_length / pi
    double relative_error = 0.0;
    double intercept = 0.0;
    bool within_tolerance = false;
};

// Least-squares fit of the counting index j against sqrt|lambda_j| over the
// first max_points eigenvalues (with multiplicity), compared to L / pi.
WeylReport weyl_count_check(const std::vector<SpectralPoint>& points, double total_length,
                            int max_points = 50, double rel_tol = 0.01);

struct AdjointPairingReport {
    int checked = 0;
    int failures = 0;
    double worst = 0.0;  // largest relative sigma_min of the adjoint secular matrix at -conj(k)
};

// Every nonreal eigenvalue k^2 must have conj(k)^2 in the adjoint spectrum.
AdjointPairingReport check_adjoint_pairing(const SecularSystem& sys,
                                           const std::vector<SpectralPoint>& points,
                                           double tol = 1e-7);

}  // namespace qgraph
