#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qgraph/bcspace.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/spectrum.hpp"

namespace qgraph {

// G = diag(G_E, G_I, G_I) acting on K = K_E + K_I- + K_I+.
struct BlockTransform {
    Matrix GE;
    Matrix GI;

    Matrix assemble() const;
    BlockTransform inverse() const;
    static BlockTransform identity(const MetricGraph& g);
};

// The transform maps the source conditions onto the target ones:
//   M(G A G^{-1}, G B G^{-1}) = M(A', B'),  S_source = G^{-1} S_target G.
struct SimilarityCertificate {
    BlockTransform transform;
    BoundaryConditions source;
    BoundaryConditions target;
    bool target_self_adjoint = false;
    double projector_residual = 0.0;
    std::optional<double> k;  // real k > 0 at which the target was built, if any
    bool single_k = false;    // the conjugation was only confirmed at k
    std::optional<Matrix> metric;  // G* G when the target is self-adjoint
};

// Requires equal internal lengths and invertible blocks (throws Error).
// Returns the certificate when the projector distance is at most tol.
std::optional<SimilarityCertificate> verify_similarity(const MetricGraph& g,
                                                       const BoundaryConditions& bc,
                                                       const BoundaryConditions& target,
                                                       const BlockTransform& t, double tol = 1e-9,
                                                       double* residual = nullptr);

enum class SimilarityOutcome {
    Certified,
    Irregular,
    UnequalLengths,
    Defective,
    NonUnimodular,
    Obstruction,  // structured search failed; inconclusive
};
std::string to_string(SimilarityOutcome o);

struct SimilaritySearch {
    SimilarityOutcome outcome = SimilarityOutcome::Obstruction;
    std::optional<SimilarityCertificate> certificate;
    std::string diagnostic;
    double eigenvector_condition = 0.0;
    double unimodularity_defect = 0.0;  // max | |mu| - 1 | over eigenvalues of S(k)
    int metric_dimension = 0;           // dimension of the structured solution space
};

struct SimilarityOptions {
    double k = 1.0;  // real k > 0 for the unitarity test
    double tol = 1e-8;
    double max_eigenvector_condition = 1e8;
    int random_trials = 200;
    unsigned seed = 7u;
};

// Looks for a block-structured Hermitian Theta > 0 with S(k)* Theta S(k) =
// Theta, then G = Theta^{1/2} makes G S G^{-1} unitary and the target
// self-adjoint. The conjugation is then checked at three imaginary k.
SimilaritySearch find_similarity_to_selfadjoint(const MetricGraph& g,
                                                const BoundaryConditions& bc,
                                                const SimilarityOptions& opts = {});

struct MetricOperator {
    Matrix theta;      // G* G
    Matrix theta_inv;  // (G* G)^{-1}
    double min_eigenvalue = 0.0;
    double inverse_residual = 0.0;  // ||Theta Theta^{-1} - 1||
    // max over kappa of ||S(i kappa)* - Theta S(i kappa) Theta^{-1}|| / ||S||.
    double quasi_residual = 0.0;
};

// Throws Error when the target is not self-adjoint.
MetricOperator metric_operator(const SimilarityCertificate& cert,
                               const std::vector<double>& kappas = {0.5, 1.0, 2.0});

enum class EndType { Dirichlet, Neumann, Robin };
std::string to_string(EndType t);

struct IntervalProblem {
    EndType left = EndType::Dirichlet;
    EndType right = EndType::Dirichlet;
    cplx left_sigma;   // scalar scattering coefficient at x = 0
    cplx right_sigma;  // scalar scattering coefficient at x = a
    double length = 1.0;
    int multiplicity = 1;
};

struct Decoupling {
    std::optional<std::vector<IntervalProblem>> intervals;
    BlockTransform transform;
    std::vector<std::string> violations;
    double k = 1.0;
};

// Splits a compact equal-length graph whose S(k) does not couple the x = 0
// and x = a ends into independent intervals by simultaneously diagonalising
// both blocks. Each hypothesis failure is listed in violations.
Decoupling decouple_symmetric_graph(const MetricGraph& g, const BoundaryConditions& bc,
                                    double k = 1.0, double tol = 1e-9);

// Boundary conditions of one decoupled interval.
BoundaryConditions interval_conditions(const IntervalProblem& p, double k);

// Union of the interval spectra (multiplicities scaled), zero modes included.
std::vector<SpectralPoint> decoupled_spectrum(const std::vector<IntervalProblem>& intervals,
                                              double k, const SpectrumOptions& opts);

struct CrossValidation {
    bool matches = false;
    double max_distance = 0.0;
    int direct_count = 0;     // with multiplicity
    int decoupled_count = 0;  // with multiplicity
};

// Compares the multiset of lambda from the direct solver with the decoupled one.
CrossValidation cross_validate_decoupling(const MetricGraph& g, const BoundaryConditions& bc,
                                          const Decoupling& dec, const SpectrumOptions& opts,
                                          double tol = 1e-8);

}  // namespace qgraph
