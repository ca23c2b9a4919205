#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgraph/linalg.hpp"

namespace qgraph {

class GraphError : public Error {
public:
    using Error::Error;
};

struct InternalEdge {
    std::string from;  // vertex at x = 0
    std::string to;    // vertex at x = length
    double length = 1.0;
};

struct ExternalEdge {
    std::string vertex;  // vertex at x = 0; the edge extends to infinity
};

struct EdgeIndex {
    enum class Kind { External, Internal };
    Kind kind = Kind::External;
    int position = 0;
};

// Finite metric graph with a frozen coordinate order.
//
// Boundary coordinates are laid out as
//   [ external e at 0 | internal i at 0 | internal i at a_i ]
// so that d = |E| + 2|I|. Edge rows (used by kernels and eigenfunctions)
// are ordered externals first, then internals.
class MetricGraph {
public:
    MetricGraph() = default;
    MetricGraph(std::vector<std::string> vertices, std::vector<InternalEdge> internal,
                std::vector<ExternalEdge> external);

    const std::vector<std::string>& vertices() const { return vertices_; }
    const std::vector<InternalEdge>& internal_edges() const { return internal_; }
    const std::vector<ExternalEdge>& external_edges() const { return external_; }

    int num_external() const { return static_cast<int>(external_.size()); }
    int num_internal() const { return static_cast<int>(internal_.size()); }
    int num_edges() const { return num_external() + num_internal(); }
    int dim() const { return num_external() + 2 * num_internal(); }

    bool compact() const { return external_.empty(); }
    bool equal_lengths(double rel_tol = 1e-12) const;
    double total_length() const;
    double max_length() const;
    Eigen::VectorXd lengths() const;

    int external_coord(int e) const { return e; }
    int left_coord(int i) const { return num_external() + i; }
    int right_coord(int i) const { return num_external() + num_internal() + i; }
    int edge_row(EdgeIndex idx) const {
        return idx.kind == EdgeIndex::Kind::External ? idx.position : num_external() + idx.position;
    }

    bool has_vertex(const std::string& v) const;

    // Boundary coordinates incident to v, in increasing coordinate order.
    std::vector<int> vertex_coordinates(const std::string& v) const;

private:
    std::vector<std::string> vertices_;
    std::vector<InternalEdge> internal_;
    std::vector<ExternalEdge> external_;
};

struct ValidationReport {
    int d = 0;
    int num_external = 0;
    int num_internal = 0;
    int num_vertices = 0;
    bool compact = false;
    bool equal_length = false;
    std::map<std::string, int> degrees;
};

// Throws GraphError on duplicate vertices, dangling references, or
// nonpositive / non-finite lengths.
ValidationReport validate(const MetricGraph& g);

// Loops count twice. Throws GraphError for an unknown vertex.
int degree(const MetricGraph& g, const std::string& v);

namespace graphs {

MetricGraph interval(double length);
MetricGraph half_lines(int count);
// Compact star: centre "c", leaves "v0".."v{n-1}", edges oriented outward.
MetricGraph compact_star(int edges, double length);
// Cube graph Q3 with edges oriented from even to odd vertices.
MetricGraph cube(double length);
// Two vertices joined by two parallel edges u -> w.
MetricGraph two_edge_loop(double length);
// Internal edge v0 -> v1 with an external lead attached at v1.
MetricGraph edge_with_lead(double length);

}  // namespace graphs

}  // namespace qgraph
