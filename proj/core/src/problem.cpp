#include "qgraph/problem.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include "qgraph/presets.hpp"

namespace qgraph {

namespace {

using json = nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw InputError(where + ": " + what);
}

void allow_keys(const json& obj, const std::string& where, std::initializer_list<const char*> keys) {
    if (!obj.is_object()) fail(where, "expected an object");
    const std::set<std::string> ok(keys.begin(), keys.end());
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!ok.count(key)) fail(where, "unknown key '" + key + "'");
    }
}

double get_number(const json& v, const std::string& where) {
    if (!v.is_number()) fail(where, "expected a number");
    return v.get<double>();
}

int get_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) fail(where, "expected an integer");
    return v.get<int>();
}

bool get_bool(const json& v, const std::string& where) {
    if (!v.is_boolean()) fail(where, "expected true or false");
    return v.get<bool>();
}

std::string get_string(const json& v, const std::string& where) {
    if (!v.is_string()) fail(where, "expected a string");
    return v.get<std::string>();
}

// A number or a two-element array [re, im].
cplx get_complex(const json& v, const std::string& where) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    fail(where, "expected a number or [re, im]");
}

Matrix get_matrix(const json& v, const std::string& where) {
    if (!v.is_array()) fail(where, "expected an array of rows");
    const auto rows = static_cast<Eigen::Index>(v.size());
    if (rows == 0) return Matrix(0, 0);
    if (!v[0].is_array()) fail(where + "[0]", "expected a row array");
    const auto cols = static_cast<Eigen::Index>(v[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = v[static_cast<std::size_t>(r)];
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols)
            fail(rw, "rows must all have " + std::to_string(cols) + " entries");
        for (Eigen::Index c = 0; c < cols; ++c)
            m(r, c) = get_complex(row[static_cast<std::size_t>(c)], rw + "[" + std::to_string(c) + "]");
    }
    return m;
}

Matrix get_square(const json& v, const std::string& where, int n) {
    Matrix m = get_matrix(v, where);
    if (m.rows() != n || m.cols() != n)
        fail(where, "expected a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    return m;
}

MetricGraph parse_graph(const json& g, const std::string& where) {
    if (!g.is_object()) fail(where, "expected an object");
    if (g.contains("builtin")) {
        allow_keys(g, where, {"builtin", "length", "edges"});
        const double len = g.contains("length") ? get_number(g["length"], where + ".length") : 1.0;
        const int edges = g.contains("edges") ? get_int(g["edges"], where + ".edges") : 2;
        try {
            return builtin_graph(get_string(g["builtin"], where + ".builtin"), len, edges);
        } catch (const InputError&) {
            throw;
        } catch (const Error& e) {
            fail(where, e.what());
        }
    }
    allow_keys(g, where, {"vertices", "internal_edges", "external_edges"});
    std::vector<std::string> vertices;
    std::vector<InternalEdge> internal;
    std::vector<ExternalEdge> external;
    if (!g.contains("vertices") || !g["vertices"].is_array()) fail(where + ".vertices", "expected an array");
    for (std::size_t j = 0; j < g["vertices"].size(); ++j)
        vertices.push_back(get_string(g["vertices"][j], where + ".vertices[" + std::to_string(j) + "]"));
    if (g.contains("internal_edges")) {
        const json& arr = g["internal_edges"];
        if (!arr.is_array()) fail(where + ".internal_edges", "expected an array");
        for (std::size_t j = 0; j < arr.size(); ++j) {
            const std::string w = where + ".internal_edges[" + std::to_string(j) + "]";
            allow_keys(arr[j], w, {"from", "to", "length"});
            if (!arr[j].contains("from") || !arr[j].contains("to") || !arr[j].contains("length"))
                fail(w, "needs from, to and length");
            internal.push_back({get_string(arr[j]["from"], w + ".from"), get_string(arr[j]["to"], w + ".to"),
                                get_number(arr[j]["length"], w + ".length")});
        }
    }
    if (g.contains("external_edges")) {
        const json& arr = g["external_edges"];
        if (!arr.is_array()) fail(where + ".external_edges", "expected an array");
        for (std::size_t j = 0; j < arr.size(); ++j) {
            const std::string w = where + ".external_edges[" + std::to_string(j) + "]";
            allow_keys(arr[j], w, {"vertex"});
            if (!arr[j].contains("vertex")) fail(w, "needs vertex");
            external.push_back({get_string(arr[j]["vertex"], w + ".vertex")});
        }
    }
    try {
        return MetricGraph(std::move(vertices), std::move(internal), std::move(external));
    } catch (const Error& e) {
        fail(where, e.what());
    }
}

VertexCondition parse_vertex_condition(const json& v, const std::string& where) {
    allow_keys(v, where, {"type", "gamma", "tau"});
    VertexCondition c;
    if (v.contains("type")) c.type = get_string(v["type"], where + ".type");
    if (v.contains("gamma")) c.gamma = get_complex(v["gamma"], where + ".gamma");
    if (v.contains("tau")) c.tau = get_number(v["tau"], where + ".tau");
    return c;
}

struct ParsedBc {
    std::optional<MetricGraph> graph;
    BoundaryConditions bc;
    std::string source;
};

ParsedBc parse_bc(const json& b, const std::string& where, const std::optional<MetricGraph>& graph) {
    allow_keys(b, where, {"matrices", "sectorial", "preset", "params", "vertex_local"});
    const int forms = static_cast<int>(b.contains("matrices")) + static_cast<int>(b.contains("sectorial")) +
                      static_cast<int>(b.contains("preset")) + static_cast<int>(b.contains("vertex_local"));
    if (forms != 1) fail(where, "give exactly one of matrices, sectorial, preset, vertex_local");
    if (b.contains("params") && !b.contains("preset")) fail(where + ".params", "only valid with preset");
    ParsedBc out;
    try {
        if (b.contains("preset")) {
            PresetParams p;
            if (b.contains("params")) {
                const json& pj = b["params"];
                const std::string pw = where + ".params";
                allow_keys(pj, pw, {"tau", "gamma", "plus", "minus", "length", "edges"});
                if (pj.contains("tau")) p.tau = get_number(pj["tau"], pw + ".tau");
                if (pj.contains("gamma")) p.gamma = get_complex(pj["gamma"], pw + ".gamma");
                if (pj.contains("plus")) p.plus = get_int(pj["plus"], pw + ".plus");
                if (pj.contains("minus")) p.minus = get_int(pj["minus"], pw + ".minus");
                if (pj.contains("length")) p.length = get_number(pj["length"], pw + ".length");
                if (pj.contains("edges")) p.edges = get_int(pj["edges"], pw + ".edges");
            }
            const std::string name = get_string(b["preset"], where + ".preset");
            Preset pr = make_preset(name, p, graph);
            out.graph = std::move(pr.graph);
            out.bc = std::move(pr.bc);
            out.source = "preset:" + name;
            return out;
        }
        if (!graph) fail(where, "a graph is required unless a preset supplies one");
        const int d = graph->dim();
        out.graph = graph;
        if (b.contains("matrices")) {
            const json& m = b["matrices"];
            allow_keys(m, where + ".matrices", {"A", "B"});
            if (!m.contains("A") || !m.contains("B")) fail(where + ".matrices", "needs A and B");
            out.bc = BoundaryConditions(get_square(m["A"], where + ".matrices.A", d),
                                        get_square(m["B"], where + ".matrices.B", d));
            out.source = "matrices";
        } else if (b.contains("sectorial")) {
            const json& s = b["sectorial"];
            allow_keys(s, where + ".sectorial", {"P", "L"});
            if (!s.contains("P") || !s.contains("L")) fail(where + ".sectorial", "needs P and L");
            SectorialPair sp{get_square(s["P"], where + ".sectorial.P", d),
                             get_square(s["L"], where + ".sectorial.L", d)};
            const Matrix id = Matrix::Identity(d, d);
            if ((sp.P * sp.P - sp.P).norm() > 1e-9 || (sp.P - sp.P.adjoint()).norm() > 1e-9)
                fail(where + ".sectorial.P", "not an orthogonal projector");
            const Matrix pp = id - sp.P;
            if ((pp * sp.L * pp - sp.L).norm() > 1e-9 * std::max(1.0, sp.L.norm()))
                fail(where + ".sectorial.L", "L must satisfy (1 - P) L (1 - P) = L");
            out.bc = from_sectorial(sp);
            out.source = "sectorial";
        } else {
            const json& v = b["vertex_local"];
            allow_keys(v, where + ".vertex_local", {"default", "vertices"});
            VertexCondition fallback;
            if (v.contains("default"))
                fallback = parse_vertex_condition(v["default"], where + ".vertex_local.default");
            std::map<std::string, VertexCondition> per;
            if (v.contains("vertices")) {
                if (!v["vertices"].is_object()) fail(where + ".vertex_local.vertices", "expected an object");
                for (const auto& [name, c] : v["vertices"].items())
                    per[name] = parse_vertex_condition(c, where + ".vertex_local.vertices." + name);
            }
            out.bc = assemble_vertex_local(*graph, per, fallback);
            out.source = "vertex_local";
        }
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        fail(where, e.what());
    }
    return out;
}

std::pair<double, double> get_region(const json& v, const std::string& where) {
    if (v.is_number()) {
        const double r = v.get<double>();
        return {r, r};
    }
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    fail(where, "expected RE_MAX or [RE_MAX, IM_MAX]");
}

TaskSpec parse_task(const json& t, const std::string& where, const MetricGraph& g) {
    if (t.is_string()) {
        TaskSpec s;
        s.type = t.get<std::string>();
        static const std::set<std::string> types{"classify", "spectrum", "adjoint", "resolvent",
                                                 "similarity", "decouple", "regularize"};
        if (!types.count(s.type)) fail(where, "unknown task type '" + s.type + "'");
        return s;
    }
    allow_keys(t, where,
               {"type", "region", "re_min", "k", "epsilon", "residual", "eigenfunctions", "weyl", "pairing",
                "verify", "cross_validate", "compare_spectra", "grid", "target", "transform"});
    if (!t.contains("type")) fail(where, "needs type");
    json simple = t["type"];
    TaskSpec s = parse_task(simple, where + ".type", g);
    if (t.contains("region")) {
        const auto [re, im] = get_region(t["region"], where + ".region");
        s.re_max = re;
        s.im_max = im;
    }
    if (t.contains("re_min")) s.re_min = get_number(t["re_min"], where + ".re_min");
    if (t.contains("k")) s.k = get_complex(t["k"], where + ".k");
    if (t.contains("epsilon")) s.epsilon = get_number(t["epsilon"], where + ".epsilon");
    if (t.contains("residual")) s.residual = get_bool(t["residual"], where + ".residual");
    if (t.contains("eigenfunctions")) s.eigenfunctions = get_bool(t["eigenfunctions"], where + ".eigenfunctions");
    if (t.contains("weyl")) s.weyl = get_bool(t["weyl"], where + ".weyl");
    if (t.contains("pairing")) s.pairing = get_bool(t["pairing"], where + ".pairing");
    if (t.contains("verify")) s.verify = get_bool(t["verify"], where + ".verify");
    if (t.contains("cross_validate")) s.cross_validate = get_bool(t["cross_validate"], where + ".cross_validate");
    if (t.contains("compare_spectra"))
        s.compare_spectra = get_bool(t["compare_spectra"], where + ".compare_spectra");
    if (t.contains("grid")) {
        s.grid = get_int(t["grid"], where + ".grid");
        if (s.grid < 0 || s.grid == 1) fail(where + ".grid", "expected 0 or at least 2");
    }
    if (t.contains("target")) s.target = parse_bc(t["target"], where + ".target", g).bc;
    if (t.contains("transform")) {
        const json& tr = t["transform"];
        allow_keys(tr, where + ".transform", {"GE", "GI"});
        BlockTransform bt;
        bt.GE = tr.contains("GE") ? get_square(tr["GE"], where + ".transform.GE", g.num_external())
                                  : Matrix::Identity(g.num_external(), g.num_external());
        bt.GI = tr.contains("GI") ? get_square(tr["GI"], where + ".transform.GI", g.num_internal())
                                  : Matrix::Identity(g.num_internal(), g.num_internal());
        s.transform = bt;
    }
    if (s.transform && !s.target) fail(where, "a transform needs a target");
    if (s.epsilon && !(*s.epsilon > 0.0)) fail(where + ".epsilon", "must be positive");
    return s;
}

}  // namespace

ProblemFile parse_problem(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("invalid JSON: ") + e.what());
    }
    allow_keys(root, "$", {"name", "graph", "bc", "tasks", "options"});
    ProblemFile p;
    if (root.contains("name")) p.name = get_string(root["name"], "$.name");

    std::optional<MetricGraph> graph;
    if (root.contains("graph")) graph = parse_graph(root["graph"], "$.graph");
    if (!root.contains("bc")) fail("$", "missing bc");
    ParsedBc bc = parse_bc(root["bc"], "$.bc", graph);
    p.graph = *bc.graph;
    p.bc = std::move(bc.bc);
    p.bc_source = bc.source;
    try {
        validate(p.graph);
    } catch (const Error& e) {
        fail("$.graph", e.what());
    }

    if (root.contains("options")) {
        const json& o = root["options"];
        allow_keys(o, "$.options", {"tol", "region", "threads"});
        if (o.contains("tol")) {
            p.tol = get_number(o["tol"], "$.options.tol");
            if (!(*p.tol > 0.0)) fail("$.options.tol", "must be positive");
        }
        if (o.contains("region")) p.region = get_region(o["region"], "$.options.region");
        if (o.contains("threads")) {
            p.threads = get_int(o["threads"], "$.options.threads");
            if (*p.threads < 1) fail("$.options.threads", "must be at least 1");
        }
    }

    if (root.contains("tasks")) {
        const json& tasks = root["tasks"];
        if (!tasks.is_array()) fail("$.tasks", "expected an array");
        for (std::size_t j = 0; j < tasks.size(); ++j)
            p.tasks.push_back(parse_task(tasks[j], "$.tasks[" + std::to_string(j) + "]", p.graph));
    } else {
        p.tasks.push_back(TaskSpec{});
        p.tasks.back().type = "classify";
    }
    json echo = root;
    if (echo.contains("options")) echo["options"].erase("threads");
    p.canonical_input = echo.dump();
    return p;
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read problem file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_problem(buf.str());
}

}  // namespace qgraph
