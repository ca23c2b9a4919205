#include "qgraph/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

namespace qgraph {

MetricGraph::MetricGraph(std::vector<std::string> vertices, std::vector<InternalEdge> internal,
                         std::vector<ExternalEdge> external)
    : vertices_(std::move(vertices)), internal_(std::move(internal)), external_(std::move(external)) {
    validate(*this);
}

bool MetricGraph::equal_lengths(double rel_tol) const {
    if (internal_.empty()) return true;
    const double a0 = internal_.front().length;
    return std::all_of(internal_.begin(), internal_.end(), [&](const InternalEdge& e) {
        return std::abs(e.length - a0) <= rel_tol * a0;
    });
}

double MetricGraph::total_length() const {
    double s = 0.0;
    for (const auto& e : internal_) s += e.length;
    return s;
}

double MetricGraph::max_length() const {
    double m = 0.0;
    for (const auto& e : internal_) m = std::max(m, e.length);
    return m;
}

Eigen::VectorXd MetricGraph::lengths() const {
    Eigen::VectorXd a(num_internal());
    for (int i = 0; i < num_internal(); ++i) a(i) = internal_[i].length;
    return a;
}

bool MetricGraph::has_vertex(const std::string& v) const {
    return std::find(vertices_.begin(), vertices_.end(), v) != vertices_.end();
}

std::vector<int> MetricGraph::vertex_coordinates(const std::string& v) const {
    if (!has_vertex(v)) throw GraphError("unknown vertex '" + v + "'");
    std::vector<int> coords;
    for (int e = 0; e < num_external(); ++e)
        if (external_[e].vertex == v) coords.push_back(external_coord(e));
    for (int i = 0; i < num_internal(); ++i)
        if (internal_[i].from == v) coords.push_back(left_coord(i));
    for (int i = 0; i < num_internal(); ++i)
        if (internal_[i].to == v) coords.push_back(right_coord(i));
    return coords;
}

ValidationReport validate(const MetricGraph& g) {
    std::set<std::string> seen;
    for (const auto& v : g.vertices()) {
        if (!seen.insert(v).second) throw GraphError("duplicate vertex '" + v + "'");
    }
    auto check_ref = [&](const std::string& v, const std::string& what) {
        if (!seen.count(v)) throw GraphError(what + " references unknown vertex '" + v + "'");
    };
    for (int i = 0; i < g.num_internal(); ++i) {
        const auto& e = g.internal_edges()[i];
        const std::string name = "internal edge " + std::to_string(i);
        check_ref(e.from, name);
        check_ref(e.to, name);
        if (!std::isfinite(e.length) || e.length <= 0.0)
            throw GraphError(name + " has nonpositive or non-finite length");
    }
    for (int e = 0; e < g.num_external(); ++e)
        check_ref(g.external_edges()[e].vertex, "external edge " + std::to_string(e));

    ValidationReport r;
    r.d = g.dim();
    r.num_external = g.num_external();
    r.num_internal = g.num_internal();
    r.num_vertices = static_cast<int>(g.vertices().size());
    r.compact = g.compact();
    r.equal_length = g.equal_lengths();
    for (const auto& v : g.vertices()) r.degrees[v] = 0;
    for (const auto& e : g.external_edges()) ++r.degrees[e.vertex];
    for (const auto& e : g.internal_edges()) {
        ++r.degrees[e.from];
        ++r.degrees[e.to];
    }
    return r;
}

int degree(const MetricGraph& g, const std::string& v) {
    if (!g.has_vertex(v)) throw GraphError("unknown vertex '" + v + "'");
    int deg = 0;
    for (const auto& e : g.external_edges()) deg += (e.vertex == v);
    for (const auto& e : g.internal_edges()) deg += (e.from == v) + (e.to == v);
    return deg;
}

namespace graphs {

MetricGraph interval(double length) {
    return MetricGraph({"v0", "v1"}, {{"v0", "v1", length}}, {});
}

MetricGraph half_lines(int count) {
    std::vector<ExternalEdge> ext(static_cast<std::size_t>(count), ExternalEdge{"c"});
    return MetricGraph({"c"}, {}, std::move(ext));
}

MetricGraph compact_star(int edges, double length) {
    std::vector<std::string> verts{"c"};
    std::vector<InternalEdge> in;
    for (int j = 0; j < edges; ++j) {
        verts.push_back("v" + std::to_string(j));
        in.push_back({"c", verts.back(), length});
    }
    return MetricGraph(std::move(verts), std::move(in), {});
}

MetricGraph cube(double length) {
    std::vector<std::string> verts;
    for (int v = 0; v < 8; ++v) verts.push_back("q" + std::to_string(v));
    std::vector<InternalEdge> in;
    for (int v = 0; v < 8; ++v) {
        if (std::popcount(static_cast<unsigned>(v)) % 2 != 0) continue;
        for (int bit = 0; bit < 3; ++bit) {
            const int w = v ^ (1 << bit);
            in.push_back({verts[v], verts[w], length});
        }
    }
    return MetricGraph(std::move(verts), std::move(in), {});
}

MetricGraph two_edge_loop(double length) {
    return MetricGraph({"u", "w"}, {{"u", "w", length}, {"u", "w", length}}, {});
}

MetricGraph edge_with_lead(double length) {
    return MetricGraph({"v0", "v1"}, {{"v0", "v1", length}}, {{"v1"}});
}

}  // namespace graphs

}  // namespace qgraph
