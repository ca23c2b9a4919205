#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgraph/bcspace.hpp"
#include "qgraph/graph.hpp"
#include "qgraph/similarity.hpp"

namespace qgraph {

// Malformed or inconsistent problem file.
class InputError : public Error {
public:
    using Error::Error;
};

struct TaskSpec {
    std::string type;  // classify | spectrum | adjoint | resolvent | similarity | decouple | regularize
    std::optional<double> re_max;
    std::optional<double> im_max;
    std::optional<double> re_min;
    std::optional<cplx> k;
    std::optional<double> epsilon;
    bool residual = true;
    bool eigenfunctions = false;
    bool weyl = false;
    bool pairing = true;
    bool verify = true;
    bool cross_validate = true;
    bool compare_spectra = false;
    int grid = 0;  // resolvent kernel grid size, 0 = none
    std::optional<BoundaryConditions> target;
    std::optional<BlockTransform> transform;
};

struct ProblemFile {
    std::string name;
    MetricGraph graph;
    BoundaryConditions bc;
    std::string bc_source;  // matrices | sectorial | preset:<name> | vertex_local
    std::vector<TaskSpec> tasks;
    std::optional<double> tol;
    std::optional<std::pair<double, double>> region;
    std::optional<int> threads;
    std::string canonical_input;  // parsed input re-serialised, for the report echo
};

// Throws InputError with a path-like location on any schema violation.
ProblemFile parse_problem(const std::string& text);
ProblemFile load_problem(const std::string& path);

}  // namespace qgraph
