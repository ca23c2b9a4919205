#include "qgraph/report.hpp"

#include <cmath>
#include <cstdio>
#include <functional>

#include <nlohmann/json.hpp>
#include "qgraph/resolvent.hpp"
#include "qgraph/similarity.hpp"
#include "qgraph/spectrum.hpp"

#ifndef QGRAPH_VERSION
#define QGRAPH_VERSION "0.0.0"
#endif

namespace qgraph {

std::string version() { return QGRAPH_VERSION; }

namespace {

using json = nlohmann::json;

constexpr double kDefaultRegion = 20.0;
const char* const kIrregularRefusal =
    "irregular boundary conditions; point spectrum is C\xE2\x88\x96[0,\xE2\x88\x9E)";

// Deterministic writer: sorted keys, %.17g floats, non-finite as null.
void write(const json& j, std::string& out, int indent) {
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case json::value_t::null: out += "null"; return;
        case json::value_t::boolean: out += j.get<bool>() ? "true" : "false"; return;
        case json::value_t::number_integer: out += std::to_string(j.get<long long>()); return;
        case json::value_t::number_unsigned: out += std::to_string(j.get<unsigned long long>()); return;
        case json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            out += buf;
            return;
        }
        case json::value_t::string: out += j.dump(); return;
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            const bool flat = std::all_of(j.begin(), j.end(), [](const json& e) { return e.is_primitive(); });
            out += "[";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += flat ? ", " : ",";
                if (!flat) out += "\n" + inner;
                write(e, out, indent + 1);
                first = false;
            }
            if (!flat) out += "\n" + pad;
            out += "]";
            return;
        }
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",";
                out += "\n" + inner + json(it.key()).dump() + ": ";
                write(it.value(), out, indent + 1);
                first = false;
            }
            out += "\n" + pad + "}";
            return;
        }
        default: out += "null"; return;
    }
}

std::string dump(const json& j) {
    std::string out;
    write(j, out, 0);
    out += "\n";
    return out;
}

json cj(cplx z) { return json::array({z.real(), z.imag()}); }

json mj(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(cj(m(r, c)));
        rows.push_back(row);
    }
    return rows;
}

json vj(const Vector& v) {
    json out = json::array();
    for (Eigen::Index j = 0; j < v.size(); ++j) out.push_back(cj(v(j)));
    return out;
}

json bcj(const BoundaryConditions& bc) { return {{"A", mj(bc.A)}, {"B", mj(bc.B)}}; }

json rankj(const RankInfo& r) {
    return {{"rank", r.rank}, {"threshold", r.threshold}, {"sigma_max", r.sigma_max}, {"gap", r.gap}};
}

json rectj(const Rect& r) {
    return {{"re_min", r.re0}, {"re_max", r.re1}, {"im_min", r.im0}, {"im_max", r.im1}};
}

json graphj(const MetricGraph& g) {
    const ValidationReport v = validate(g);
    json deg = json::object();
    for (const auto& [name, n] : v.degrees) deg[name] = n;
    return {{"d", v.d},
            {"num_external", v.num_external},
            {"num_internal", v.num_internal},
            {"num_vertices", v.num_vertices},
            {"compact", v.compact},
            {"equal_length", v.equal_length},
            {"total_length", g.total_length()},
            {"degrees", deg}};
}

json classificationj(const Classification& c, const MetricGraph& g) {
    json out{{"d", c.d},
             {"dim_M", c.dim_M},
             {"pair_rank", rankj(c.pair_rank)},
             {"regular", c.regular},
             {"self_adjoint", c.self_adjoint},
             {"m_sectorial", c.m_sectorial},
             {"spectrum_is_whole_plane", c.spectrum_is_whole_plane},
             {"irregular_dim_d", c.irregular_dim_d},
             {"essential_spectrum", to_string(essential_spectrum(c, g))}};
    out["witness_k"] = c.witness_k ? cj(*c.witness_k) : json(nullptr);
    out["t_self_adjoint"] = c.t_self_adjoint ? json(*c.t_self_adjoint) : json(nullptr);
    out["sectorial"] = c.sectorial ? json{{"P", mj(c.sectorial->P)}, {"L", mj(c.sectorial->L)}}
                                   : json(nullptr);
    return out;
}

json pointj(const SpectralPoint& p) {
    return {{"k", cj(p.k)},
            {"lambda", cj(p.lambda)},
            {"winding_multiplicity", p.winding_multiplicity},
            {"geometric_multiplicity", p.geometric_multiplicity},
            {"status", to_string(p.status)},
            {"singular_value_gap", p.singular_value_gap},
            {"relative_sigma_min", p.relative_sigma_min}};
}

struct TaskOutcome {
    std::string status = "ok";  // ok | refused | failed
    std::string message;
    json result = json::object();
};

struct Context {
    const ProblemFile& problem;
    const RunConfig& config;
    const Classification& cls;
    NumericOptions numeric;
    Report& report;
    bool spectrum_recorded = false;
    std::size_t task_index = 0;
};

std::pair<double, double> region_for(const Context& ctx, const TaskSpec& t) {
    if (ctx.config.region) return *ctx.config.region;
    double re = kDefaultRegion, im = kDefaultRegion;
    if (ctx.problem.region) std::tie(re, im) = *ctx.problem.region;
    if (t.re_max) re = *t.re_max;
    if (t.im_max) im = *t.im_max;
    return {re, im};
}

SpectrumOptions spectrum_options(const Context& ctx, const TaskSpec& t) {
    const auto [re, im] = region_for(ctx, t);
    if (!(re > 0.0) || !(im > 0.0)) throw InputError("search region must be positive");
    SpectrumOptions so;
    so.re_max = re;
    so.im_max = im;
    so.re_min = t.re_min;
    so.roots.threads = ctx.config.threads;
    return so;
}

json diagnosticsj(const SolverDiagnostics& d) {
    return {{"upper_region", rectj(d.upper_region)},
            {"band_region", rectj(d.band_region)},
            {"boundary_winding", d.boundary_winding},
            {"multiplicity_sum", d.multiplicity_sum},
            {"complete", d.complete},
            {"evaluations", d.evaluations},
            {"boxes", d.boxes},
            {"dropped_origin", d.dropped_origin},
            {"dropped_negative", d.dropped_negative},
            {"warnings", d.warnings}};
}

void record_points(Context& ctx, const SecularSystem& sys, const std::vector<SpectralPoint>& pts,
                   const SpectrumOptions& so) {
    if (ctx.spectrum_recorded) return;
    ctx.spectrum_recorded = true;
    for (const auto& p : pts)
        ctx.report.eigen_rows.push_back(
            {p.k, p.lambda, p.winding_multiplicity, p.geometric_multiplicity, to_string(p.status)});
    ctx.report.system = sys;
    const double im = std::min(so.im_max, sys.graph().max_length() > 0 ? 600.0 / sys.graph().max_length()
                                                                        : so.im_max);
    ctx.report.plot_region = {so.re_min.value_or(-so.re_max), so.re_max, -std::min(so.band, 0.25 * im), im};
}

TaskOutcome spectrum_task(Context& ctx, const TaskSpec& t) {
    TaskOutcome out;
    const ProblemFile& p = ctx.problem;
    const SecularSystem sys(p.graph, p.bc);
    SpectrumOptions so = spectrum_options(ctx, t);
    out.result["essential_spectrum"] = to_string(essential_spectrum(ctx.cls, p.graph));
    if (ctx.cls.dim_M != ctx.cls.d) {
        out.status = "refused";
        out.message = "dim M differs from d; the spectrum is the whole plane";
        return out;
    }
    if (!ctx.cls.regular && det_vanishes_identically(sys)) {
        out.status = "refused";
        out.message = kIrregularRefusal;
        return out;
    }
    if (!ctx.cls.regular) {
        so.allow_irregular = true;
        out.message = "irregular boundary conditions; the resolvent set may be empty";
    }

    SolverDiagnostics diag;
    std::vector<SpectralPoint> pts = find_eigenvalues(sys, so, &diag);
    if (auto z = zero_mode(sys, so.rank_factor)) pts.insert(pts.begin(), *z);
    record_points(ctx, sys, pts, so);

    json points = json::array();
    for (const auto& q : pts) {
        json pj = pointj(q);
        if (t.eigenfunctions &&
            (q.status == PointStatus::Eigenvalue || q.status == PointStatus::ZeroMode)) {
            json efs = json::array();
            for (const auto& ef : eigenfunction(sys, q, so.rank_factor))
                efs.push_back({{"s", vj(ef.s)},
                               {"alpha", vj(ef.alpha)},
                               {"beta", vj(ef.beta)},
                               {"zero_mode", ef.zero_mode},
                               {"bc_residual", ef.bc_residual}});
            pj["eigenfunctions"] = efs;
        }
        if (q.status == PointStatus::SpectralSingularityCandidate || q.status == PointStatus::RealKCandidate) {
            json prof = json::array();
            for (const auto& s : singularity_profile(sys, q.k.real()))
                prof.push_back({{"epsilon", s.epsilon}, {"middle_norm", s.middle_norm}});
            pj["singularity_profile"] = prof;
        }
        points.push_back(pj);
    }
    out.result["points"] = points;
    out.result["diagnostics"] = diagnosticsj(diag);

    if (ctx.cls.regular) {
        json residual = json::array();
        if (t.residual)
            for (double l : residual_spectrum(sys, so.re_max, so)) residual.push_back(l);
        out.result["residual_spectrum"] = residual;
        if (t.pairing) {
            try {
                const AdjointPairingReport r = check_adjoint_pairing(sys, pts);
                out.result["adjoint_pairing"] = {{"checked", r.checked}, {"failures", r.failures}, {"worst", r.worst}};
            } catch (const Error& e) {
                out.result["adjoint_pairing"] = {{"error", e.what()}};
            }
        }
    }
    if (t.weyl) {
        try {
            const WeylReport w = weyl_count_check(pts, p.graph.total_length());
            out.result["weyl"] = {{"count", w.count},
                                  {"slope", w.slope},
                                  {"expected_slope", w.expected_slope},
                                  {"relative_error", w.relative_error},
                                  {"intercept", w.intercept},
                                  {"within_tolerance", w.within_tolerance}};
        } catch (const Error& e) {
            out.result["weyl"] = {{"error", e.what()}};
        }
    }
    if (!diag.complete) {
        out.status = "failed";
        out.message = "argument principle bookkeeping incomplete; see diagnostics";
    }
    return out;
}

TaskOutcome adjoint_task(Context& ctx, const TaskSpec&) {
    TaskOutcome out;
    const BoundaryConditions& bc = ctx.problem.bc;
    const BoundaryConditions adj = adjoint(bc, ctx.numeric);
    const int dm = dim_M(bc), dma = dim_M(adj);
    out.result["adjoint"] = bcj(adj);
    out.result["dim_M"] = dm;
    out.result["dim_M_adjoint"] = dma;
    out.result["dimension_sum_ok"] = dm + dma == 2 * bc.dim();
    out.result["adjoint_self_adjoint"] = is_self_adjoint(adj, ctx.numeric);
    if (dm == bc.dim()) {
        const BoundaryConditions twice = adjoint(adj, ctx.numeric);
        out.result["double_adjoint_distance"] = projector_distance(twice, bc);
        out.result["distance_to_adjoint"] = projector_distance(adj, bc);
    }
    return out;
}

TaskOutcome resolvent_task(Context& ctx, const TaskSpec& t) {
    TaskOutcome out;
    const cplx k = t.k.value_or(cplx{0.0, 1.0});
    out.result["k"] = cj(k);
    try {
        const ResolventKernel res(SecularSystem(ctx.problem.graph, ctx.problem.bc), k);
        out.result["middle_condition"] = res.middle_condition();
        out.result["scattering"] = mj(res.scattering());
        if (k.imag() > 0.0 || ctx.problem.graph.compact())
            out.result["hs_norm_boundary_part"] = hs_norm_boundary_part(res);
        if (t.verify) {
            ResolventCheckOptions co;
            const ResolventIdentityReport r = verify_resolvent_identity(res, co);
            out.result["identities"] = {{"bc_residual", r.bc_residual},
                                        {"ode_residual", r.ode_residual},
                                        {"symmetry_residual", r.symmetry_residual},
                                        {"quadrature_error", r.quadrature_error},
                                        {"test_functions", r.test_functions},
                                        {"symmetry_samples", r.symmetry_samples},
                                        {"tolerance", co.tolerance},
                                        {"passed", r.passed}};
            if (!r.passed) {
                out.status = "failed";
                out.message = "resolvent identities exceed tolerance";
            }
        }
        if (t.grid > 0) {
            const std::string name = "kernel_task" + std::to_string(ctx.task_index) + ".csv";
            ctx.report.extra_files.emplace_back(name, kernel_grid_csv(res, 0, 0, t.grid));
            out.result["grid_file"] = name;
        }
    } catch (const NearPoleError& e) {
        out.status = "failed";
        out.message = e.what();
        out.result["middle_condition"] = e.condition();
    }
    return out;
}

json certificatej(const SimilarityCertificate& c) {
    json out{{"GE", mj(c.transform.GE)},
             {"GI", mj(c.transform.GI)},
             {"target", bcj(c.target)},
             {"target_self_adjoint", c.target_self_adjoint},
             {"projector_residual", c.projector_residual},
             {"single_k", c.single_k}};
    out["k"] = c.k ? json(*c.k) : json(nullptr);
    if (c.target_self_adjoint) {
        const MetricOperator m = metric_operator(c);
        out["metric"] = {{"theta", mj(m.theta)},
                         {"theta_inverse", mj(m.theta_inv)},
                         {"min_eigenvalue", m.min_eigenvalue},
                         {"inverse_residual", m.inverse_residual},
                         {"quasi_residual", m.quasi_residual}};
    } else {
        out["metric"] = nullptr;
    }
    return out;
}

std::vector<cplx> lambdas(const std::vector<SpectralPoint>& pts) {
    std::vector<cplx> out;
    for (const auto& p : pts)
        if (p.status == PointStatus::Eigenvalue || p.status == PointStatus::ZeroMode)
            for (int m = 0; m < p.geometric_multiplicity; ++m) out.push_back(p.lambda);
    std::sort(out.begin(), out.end(), [](cplx a, cplx b) {
        if (std::abs(a.real() - b.real()) > 1e-7 * (1.0 + std::abs(a))) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

TaskOutcome similarity_task(Context& ctx, const TaskSpec& t) {
    TaskOutcome out;
    const ProblemFile& p = ctx.problem;
    std::optional<SimilarityCertificate> cert;
    if (t.target) {
        const BlockTransform tr = t.transform.value_or(BlockTransform::identity(p.graph));
        double residual = 0.0;
        cert = verify_similarity(p.graph, p.bc, *t.target, tr, 1e-9, &residual);
        out.result["mode"] = "verify";
        out.result["projector_residual"] = residual;
        if (!cert) {
            out.status = "failed";
            out.message = "transform does not map the conditions onto the target";
        }
    } else {
        SimilarityOptions so;
        if (t.k) so.k = t.k->real();
        if (!(so.k > 0.0)) throw InputError("similarity k must have positive real part");
        const SimilaritySearch s = find_similarity_to_selfadjoint(p.graph, p.bc, so);
        out.result["mode"] = "search";
        out.result["outcome"] = to_string(s.outcome);
        out.result["diagnostic"] = s.diagnostic;
        out.result["eigenvector_condition"] = s.eigenvector_condition;
        out.result["unimodularity_defect"] = s.unimodularity_defect;
        out.result["metric_dimension"] = s.metric_dimension;
        cert = s.certificate;
    }
    out.result["certificate"] = cert ? certificatej(*cert) : json(nullptr);
    if (cert && t.compare_spectra && ctx.cls.regular) {
        const SpectrumOptions so = spectrum_options(ctx, t);
        const auto a = lambdas(find_eigenvalues(SecularSystem(p.graph, p.bc), so));
        const auto b = lambdas(find_eigenvalues(SecularSystem(p.graph, cert->target), so));
        double dist = 0.0;
        const bool same = a.size() == b.size();
        if (same)
            for (std::size_t j = 0; j < a.size(); ++j) dist = std::max(dist, std::abs(a[j] - b[j]));
        out.result["spectra"] = {{"source_count", a.size()},
                                 {"target_count", b.size()},
                                 {"max_distance", same ? json(dist) : json(nullptr)},
                                 {"agree", same && dist <= 1e-8 * (1.0 + so.re_max * so.re_max)}};
    }
    return out;
}

TaskOutcome decouple_task(Context& ctx, const TaskSpec& t) {
    TaskOutcome out;
    const ProblemFile& p = ctx.problem;
    const double k = t.k ? t.k->real() : 1.0;
    const Decoupling dec = decouple_symmetric_graph(p.graph, p.bc, k);
    out.result["k"] = k;
    out.result["violations"] = dec.violations;
    if (!dec.intervals) {
        out.result["intervals"] = nullptr;
        return out;
    }
    json iv = json::array();
    for (const auto& q : *dec.intervals)
        iv.push_back({{"left", to_string(q.left)},
                      {"right", to_string(q.right)},
                      {"left_sigma", cj(q.left_sigma)},
                      {"right_sigma", cj(q.right_sigma)},
                      {"length", q.length},
                      {"multiplicity", q.multiplicity}});
    out.result["intervals"] = iv;
    out.result["GI"] = mj(dec.transform.GI);
    if (t.cross_validate) {
        const CrossValidation cv = cross_validate_decoupling(p.graph, p.bc, dec, spectrum_options(ctx, t));
        out.result["cross_validation"] = {{"matches", cv.matches},
                                          {"max_distance", cv.max_distance},
                                          {"direct_count", cv.direct_count},
                                          {"decoupled_count", cv.decoupled_count}};
        if (!cv.matches) {
            out.status = "failed";
            out.message = "decoupled spectrum differs from the direct solver";
        }
    }
    return out;
}

TaskOutcome regularize_task(Context& ctx, const TaskSpec& t) {
    TaskOutcome out;
    const double eps = t.epsilon.value_or(0.1);
    const BoundaryConditions r = regularize(ctx.problem.bc, eps, ctx.numeric);
    out.result["epsilon"] = eps;
    out.result["regularized"] = bcj(r);
    out.result["regular"] = is_regular(r, ctx.numeric).regular;
    out.result["projector_distance"] = projector_distance(r, ctx.problem.bc);
    return out;
}

}  // namespace

Report run(const ProblemFile& problem, const RunConfig& config) {
    Report report;
    json rep;
    rep["tool"] = {{"name", "qgraph"}, {"version", version()}};
    rep["input"] = json::parse(problem.canonical_input);
    rep["graph"] = graphj(problem.graph);
    rep["bc_source"] = problem.bc_source;
    rep["bc"] = bcj(problem.bc);

    NumericOptions numeric;
    if (problem.tol) numeric.tol = *problem.tol;
    if (config.tol) numeric.tol = *config.tol;
    json cfg{{"tol", numeric.tol}};
    if (config.region) cfg["region"] = {config.region->first, config.region->second};
    rep["config"] = cfg;

    const Classification cls = classify(problem.bc, numeric);
    rep["classification"] = classificationj(cls, problem.graph);

    Context ctx{problem, config, cls, numeric, report};
    json tasks = json::array();
    const std::map<std::string, std::function<TaskOutcome(Context&, const TaskSpec&)>> handlers{
        {"classify", [&](Context&, const TaskSpec&) {
             TaskOutcome o;
             o.result = rep["classification"];
             return o;
         }},
        {"spectrum", spectrum_task},
        {"adjoint", adjoint_task},
        {"resolvent", resolvent_task},
        {"similarity", similarity_task},
        {"decouple", decouple_task},
        {"regularize", regularize_task}};
    for (std::size_t j = 0; j < problem.tasks.size(); ++j) {
        const TaskSpec& t = problem.tasks[j];
        ctx.task_index = j;
        TaskOutcome o;
        try {
            o = handlers.at(t.type)(ctx, t);
        } catch (const InputError&) {
            throw;
        } catch (const std::exception& e) {
            o.status = "failed";
            o.message = e.what();
        }
        ++report.tasks_total;
        if (o.status == "failed") ++report.tasks_failed;
        tasks.push_back({{"type", t.type}, {"status", o.status}, {"message", o.message}, {"result", o.result}});
    }
    rep["tasks"] = tasks;
    rep["summary"] = {{"tasks_total", report.tasks_total}, {"tasks_failed", report.tasks_failed}};

    if (!report.system) {
        report.system = SecularSystem(problem.graph, problem.bc);
        const auto [re, im] = config.region ? *config.region
                                            : problem.region.value_or(std::make_pair(kDefaultRegion, kDefaultRegion));
        const double amax = problem.graph.max_length();
        const double top = amax > 0 ? std::min(im, 600.0 / amax) : im;
        report.plot_region = {-re, re, -std::min(0.05, 0.25 * top), top};
    }
    report.json = dump(rep);
    return report;
}

std::string emit_csv(const Report& report) {
    std::string out = "re_lambda,im_lambda,winding_multiplicity,geometric_multiplicity,status\n";
    char buf[128];
    for (const auto& r : report.eigen_rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d,%d,", r.lambda.real(), r.lambda.imag(), r.winding,
                      r.geometric);
        out += buf;
        out += r.status + "\n";
    }
    return out;
}

std::string emit_plotdata(const Report& report, int n) {
    if (n < 2) throw Error("plotdata grid needs at least two samples per axis");
    if (!report.system) throw Error("report has no secular system");
    const Rect& r = report.plot_region;
    json zeros = json::array();
    for (const auto& row : report.eigen_rows)
        zeros.push_back({{"k", cj(row.k)}, {"lambda", cj(row.lambda)}, {"status", row.status}});
    json samples = json::array();
    for (int a = 0; a < n; ++a) {
        const double im = r.im0 + (r.im1 - r.im0) * a / (n - 1);
        for (int b = 0; b < n; ++b) {
            const double re = r.re0 + (r.re1 - r.re0) * b / (n - 1);
            const LogDet ld = report.system->log_det_Z({re, im});
            const double mag = ld.singular ? 0.0 : std::exp(ld.value.real());
            const double lg = ld.singular ? -std::numeric_limits<double>::infinity() : ld.value.real() / std::log(10.0);
            samples.push_back(json::array({re, im, mag, lg}));
        }
    }
    json out{{"format", "qgraph-plotdata"},
             {"region", rectj(r)},
             {"nx", n},
             {"ny", n},
             {"columns", json::array({"re_k", "im_k", "abs_det_Z", "log10_abs_det_Z"})},
             {"zeros", zeros},
             {"samples", samples}};
    return dump(out);
}

}  // namespace qgraph
