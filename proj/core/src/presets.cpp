#include "qgraph/presets.hpp"

#include <cmath>

namespace qgraph {

namespace local {

namespace {

void require_degree(int nu) {
    if (nu < 1) throw Error("vertex condition needs at least one incident edge end");
}

// Rows 0..nu-2 enforce continuity psi_j = psi_{j+1}.
Matrix continuity(int nu) {
    Matrix a = Matrix::Zero(nu, nu);
    for (int j = 0; j + 1 < nu; ++j) {
        a(j, j) = 1.0;
        a(j, j + 1) = -1.0;
    }
    return a;
}

}  // namespace

BoundaryConditions dirichlet(int nu) {
    require_degree(nu);
    return {Matrix::Identity(nu, nu), Matrix::Zero(nu, nu)};
}

BoundaryConditions neumann(int nu) {
    require_degree(nu);
    return {Matrix::Zero(nu, nu), Matrix::Identity(nu, nu)};
}

BoundaryConditions standard(int nu) {
    require_degree(nu);
    Matrix b = Matrix::Zero(nu, nu);
    b.row(nu - 1).setOnes();
    return {continuity(nu), b};
}

BoundaryConditions delta(int nu, cplx gamma) {
    BoundaryConditions bc = standard(nu);
    bc.A(nu - 1, 0) = -gamma;
    return bc;
}

BoundaryConditions tau(double t) {
    const cplx e = std::exp(I_UNIT * t);
    Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
    a(0, 0) = 1.0;
    a(0, 1) = -e;
    b(1, 0) = 1.0;
    b(1, 1) = 1.0 / e;
    return {a, b};
}

BoundaryConditions signed_sum(int plus, int minus) {
    if (plus < 0 || minus < 0) throw Error("signed_sum: negative edge count");
    const int nu = plus + minus;
    require_degree(nu);
    Matrix b = Matrix::Zero(nu, nu);
    for (int j = 0; j < nu; ++j) b(nu - 1, j) = j < plus ? 1.0 : -1.0;
    return {continuity(nu), b};
}

}  // namespace local

namespace {

BoundaryConditions local_condition(const VertexCondition& c, int nu, const std::string& v) {
    if (c.type == "standard" || c.type == "kirchhoff") return local::standard(nu);
    if (c.type == "dirichlet") return local::dirichlet(nu);
    if (c.type == "neumann") return local::neumann(nu);
    if (c.type == "delta") return local::delta(nu, c.gamma);
    if (c.type == "tau") {
        if (nu != 2) throw Error("tau condition at vertex '" + v + "' needs degree 2");
        return local::tau(c.tau);
    }
    throw Error("unknown vertex condition type '" + c.type + "'");
}

}  // namespace

BoundaryConditions assemble_vertex_local(const MetricGraph& g,
                                         const std::map<std::string, VertexCondition>& per_vertex,
                                         const VertexCondition& fallback) {
    for (const auto& [v, c] : per_vertex) {
        (void)c;
        if (!g.has_vertex(v)) throw Error("vertex condition for unknown vertex '" + v + "'");
    }
    const int d = g.dim();
    Matrix A = Matrix::Zero(d, d), B = Matrix::Zero(d, d);
    for (const auto& v : g.vertices()) {
        const std::vector<int> coords = g.vertex_coordinates(v);
        if (coords.empty()) continue;
        const auto it = per_vertex.find(v);
        const VertexCondition& c = it == per_vertex.end() ? fallback : it->second;
        const BoundaryConditions loc = local_condition(c, static_cast<int>(coords.size()), v);
        for (std::size_t r = 0; r < coords.size(); ++r) {
            for (std::size_t s = 0; s < coords.size(); ++s) {
                A(coords[r], coords[s]) = loc.A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
                B(coords[r], coords[s]) = loc.B(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
            }
        }
    }
    return {A, B};
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names{
        "dirichlet",     "neumann",           "standard",       "kirchhoff",
        "delta",         "tau",               "intermediate",   "sgnsgn",
        "gsgnsgn",       "empty_spectrum",    "residual_example", "delta_scaled",
        "spectral_singularity", "star_standard_dirichlet"};
    return names;
}

MetricGraph builtin_graph(const std::string& name, double length, int edges) {
    if (name == "interval") return graphs::interval(length);
    if (name == "half_lines" || name == "star") return graphs::half_lines(edges);
    if (name == "compact_star") return graphs::compact_star(edges, length);
    if (name == "cube") return graphs::cube(length);
    if (name == "two_edge_loop") return graphs::two_edge_loop(length);
    if (name == "edge_with_lead") return graphs::edge_with_lead(length);
    throw Error("unknown builtin graph '" + name + "'");
}

namespace {

Preset fixed(const std::optional<MetricGraph>& graph, MetricGraph fallback, BoundaryConditions bc,
             const std::string& name) {
    MetricGraph g = graph ? *graph : std::move(fallback);
    if (g.dim() != bc.dim())
        throw Error("preset '" + name + "' has d = " + std::to_string(bc.dim()) +
                    " but the graph has d = " + std::to_string(g.dim()));
    return {std::move(g), std::move(bc)};
}

template <class T>
T need(const std::optional<T>& v, const std::string& preset, const char* field) {
    if (!v) throw Error("preset '" + preset + "' needs parameter '" + field + "'");
    return *v;
}

}  // namespace

Preset make_preset(const std::string& name, const PresetParams& params,
                   const std::optional<MetricGraph>& graph) {
    const double len = params.length.value_or(1.0);
    if (name == "dirichlet" || name == "neumann" || name == "standard" || name == "kirchhoff" ||
        name == "delta") {
        if (!graph) throw Error("preset '" + name + "' needs a graph");
        VertexCondition c;
        c.type = name;
        if (name == "delta") c.gamma = need(params.gamma, name, "gamma");
        return {*graph, assemble_vertex_local(*graph, {}, c)};
    }
    if (name == "tau") {
        VertexCondition c;
        c.type = "tau";
        c.tau = need(params.tau, name, "tau");
        MetricGraph g = graph ? *graph : graphs::half_lines(2);
        BoundaryConditions bc = assemble_vertex_local(g, {}, c);
        return {std::move(g), std::move(bc)};
    }
    if (name == "intermediate") {
        Matrix b = Matrix::Zero(2, 2);
        b(1, 0) = -1.0;
        return fixed(graph, graphs::interval(len), {Matrix::Identity(2, 2), b}, name);
    }
    if (name == "sgnsgn") return fixed(graph, graphs::half_lines(2), local::signed_sum(1, 1), name);
    if (name == "gsgnsgn") {
        const int p = need(params.plus, name, "plus"), m = need(params.minus, name, "minus");
        return fixed(graph, graphs::half_lines(p + m), local::signed_sum(p, m), name);
    }
    if (name == "empty_spectrum") {
        Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
        a(0, 0) = 1.0;
        b(1, 0) = 1.0;
        return fixed(graph, graphs::interval(len), {a, b}, name);
    }
    if (name == "residual_example") {
        Matrix l = Matrix::Zero(3, 3);
        l(1, 1) = -I_UNIT;
        l(2, 0) = 1.0;
        l(2, 2) = I_UNIT;
        return fixed(graph, graphs::edge_with_lead(len), {l, Matrix::Identity(3, 3)}, name);
    }
    if (name == "delta_scaled") {
        Matrix l = Matrix::Zero(2, 2);
        l(0, 1) = 2.0;
        l(1, 0) = 0.5;
        return fixed(graph, graphs::half_lines(2), {l, Matrix::Identity(2, 2)}, name);
    }
    if (name == "spectral_singularity") {
        Matrix a(1, 1), b(1, 1);
        a(0, 0) = -I_UNIT;
        b(0, 0) = 1.0;
        return fixed(graph, graphs::half_lines(1), {a, b}, name);
    }
    if (name == "star_standard_dirichlet") {
        MetricGraph g = graph ? *graph : graphs::compact_star(params.edges.value_or(3), len);
        if (!g.has_vertex("c")) throw Error("preset '" + name + "' needs a centre vertex 'c'");
        VertexCondition centre, ends;
        ends.type = "dirichlet";
        BoundaryConditions bc = assemble_vertex_local(g, {{"c", centre}}, ends);
        return {std::move(g), std::move(bc)};
    }
    throw Error("unknown preset '" + name + "'");
}

}  // namespace qgraph
