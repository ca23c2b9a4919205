#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qgraph/secular.hpp"

namespace qgraph {

// Axis-aligned rectangle [re0, re1] x [im0, im1] in the complex plane.
struct Rect {
    double re0 = 0.0, re1 = 0.0, im0 = 0.0, im1 = 0.0;

    double width() const { return re1 - re0; }
    double height() const { return im1 - im0; }
    bool contains(cplx z, double margin = 0.0) const {
        return z.real() >= re0 - margin && z.real() <= re1 + margin && z.imag() >= im0 - margin &&
               z.imag() <= im1 + margin;
    }
};

// An entire function given through its logarithm and logarithmic derivative.
struct HolomorphicFunction {
    std::function<LogDet(cplx)> log;
    std::function<cplx(cplx)> dlog;
};

// A zero lies on (or numerically on) a contour being walked.
class ContourHit : public Error {
public:
    using Error::Error;
};

struct RootOptions {
    int max_depth = 48;
    int min_samples_per_edge = 16;
    double samples_per_unit = 8.0;
    double max_phase_step = 0.7853981633974483;  // pi / 4
    int max_bisections = 44;
    int newton_max_iter = 80;
    double newton_tol = 1e-14;
    // Half-width of the square used to certify a Newton limit, relative to 1 + |z|.
    double cluster_radius = 1e-6;
    double strip_width = 2.0;
    int threads = 1;
};

struct Root {
    cplx z;
    int multiplicity = 1;
    bool converged = true;
};

struct RootSearch {
    std::vector<Root> roots;
    Rect region;             // rectangle actually searched (possibly nudged)
    int boundary_winding = 0;
    int multiplicity_sum = 0;
    bool complete = false;   // boundary winding == multiplicity sum and all converged
    long evaluations = 0;
    int boxes = 0;
    std::vector<std::string> warnings;
};

// Winding number of f along the boundary of r (counter-clockwise).
int winding_number(const HolomorphicFunction& f, const Rect& r, const RootOptions& opt = {},
                   long* evaluations = nullptr);

// All zeros of f inside r by recursive subdivision and the argument
// principle, polished by multiplicity-aware Newton steps. Results are sorted
// by (Re z, Im z) and do not depend on opt.threads.
RootSearch find_roots(const HolomorphicFunction& f, Rect r, const RootOptions& opt = {});

}  // namespace qgraph
