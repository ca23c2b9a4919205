#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qgraph/bcspace.hpp"
#include "qgraph/graph.hpp"

namespace qgraph {

// Local vertex conditions for a vertex of degree nu, in the order of
// MetricGraph::vertex_coordinates.
namespace local {

BoundaryConditions dirichlet(int nu);
BoundaryConditions neumann(int nu);
// Continuity plus vanishing sum of inward derivatives.
BoundaryConditions standard(int nu);
// Continuity plus sum of inward derivatives = gamma psi(v).
BoundaryConditions delta(int nu, cplx gamma);
// Two-edge interaction psi_1 = e^{i tau} psi_2, psi_1' = -e^{-i tau} psi_2'.
BoundaryConditions tau(double tau);
// Continuity and signed derivative sum over E+ (first plus edges) and E-.
BoundaryConditions signed_sum(int plus, int minus);

}  // namespace local

struct VertexCondition {
    std::string type = "standard";  // standard | kirchhoff | dirichlet | neumann | delta | tau
    cplx gamma{0.0, 0.0};
    double tau = 0.0;
};

// Places each local condition on the rows and columns of its vertex.
BoundaryConditions assemble_vertex_local(const MetricGraph& g,
                                         const std::map<std::string, VertexCondition>& per_vertex,
                                         const VertexCondition& fallback);

struct PresetParams {
    std::optional<double> tau;
    std::optional<cplx> gamma;
    std::optional<int> plus;
    std::optional<int> minus;
    std::optional<double> length;
    std::optional<int> edges;
};

struct Preset {
    MetricGraph graph;
    BoundaryConditions bc;
};

// Names of all presets in documentation order.
const std::vector<std::string>& preset_names();

// Expands a named preset. Vertex-local presets (dirichlet, neumann,
// standard, kirchhoff, delta) need a graph; the others supply a default
// graph when none is given and check the dimension otherwise. Throws Error
// for unknown names or inconsistent input.
Preset make_preset(const std::string& name, const PresetParams& params,
                   const std::optional<MetricGraph>& graph);

// Built-in graphs: interval, half_lines, star, compact_star, cube,
// two_edge_loop, edge_with_lead.
MetricGraph builtin_graph(const std::string& name, double length, int edges);

}  // namespace qgraph
