// qgraph: batch front-end for spectral problems on metric graphs.
//
//   qgraph run <problem.json> [--out DIR] [--format json|csv|plotdata]
//              [--region RE_MAX,IM_MAX] [--tol T] [--threads N]
//
// Exit status: 0 success, 1 at least one task failed, 2 input error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "qgraph/report.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kInputError = 2;

std::pair<double, double> parse_region(const std::string& s) {
    const auto comma = s.find(',');
    if (comma == std::string::npos) throw qgraph::InputError("--region expects RE_MAX,IM_MAX");
    try {
        std::size_t p1 = 0, p2 = 0;
        const std::string a = s.substr(0, comma), b = s.substr(comma + 1);
        const double re = std::stod(a, &p1), im = std::stod(b, &p2);
        if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("trailing");
        if (!(re > 0.0) || !(im > 0.0)) throw qgraph::InputError("--region values must be positive");
        return {re, im};
    } catch (const std::logic_error&) {
        throw qgraph::InputError("--region expects two numbers RE_MAX,IM_MAX");
    }
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
    if (!f) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectra of Laplacians on metric graphs", "qgraph"};
    app.set_version_flag("--version", qgraph::version());
    app.require_subcommand(1);

    std::string problem_path, out_dir, format = "json", region, tol_text;
    int threads = 1;
    auto* run = app.add_subcommand("run", "Run the tasks of a problem file");
    run->add_option("problem", problem_path, "Problem file (JSON)")->required();
    run->add_option("--out", out_dir, "Output directory; stdout when omitted");
    run->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"json", "csv", "plotdata"}));
    run->add_option("--region", region, "Search region RE_MAX,IM_MAX in the k-plane");
    run->add_option("--tol", tol_text, "Numerical rank tolerance");
    run->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kInputError;
    }

    try {
        qgraph::RunConfig config;
        config.threads = threads;
        if (!region.empty()) config.region = parse_region(region);
        if (!tol_text.empty()) {
            std::size_t pos = 0;
            double t = 0.0;
            try {
                t = std::stod(tol_text, &pos);
            } catch (const std::logic_error&) {
                pos = 0;
            }
            if (pos != tol_text.size() || !(t > 0.0)) throw qgraph::InputError("--tol expects a positive number");
            config.tol = t;
        }

        const qgraph::ProblemFile problem = qgraph::load_problem(problem_path);
        // Thread count from the command line wins over the file.
        if (problem.threads && run->count("--threads") == 0) config.threads = *problem.threads;

        const qgraph::Report report = qgraph::run(problem, config);
        std::string text;
        std::string ext;
        if (format == "json") {
            text = report.json;
            ext = ".json";
        } else if (format == "csv") {
            text = qgraph::emit_csv(report);
            ext = ".csv";
        } else {
            text = qgraph::emit_plotdata(report);
            ext = ".plot.json";
        }

        if (out_dir.empty()) {
            std::cout << text;
        } else {
            const fs::path dir(out_dir);
            fs::create_directories(dir);
            const std::string stem = fs::path(problem_path).stem().string();
            write_file(dir / (stem + ext), text);
            for (const auto& [name, contents] : report.extra_files) write_file(dir / (stem + "." + name), contents);
        }
        if (report.tasks_failed > 0)
            std::cerr << "qgraph: " << report.tasks_failed << " of " << report.tasks_total << " tasks failed\n";
        return report.exit_code();
    } catch (const qgraph::InputError& e) {
        std::cerr << "qgraph: input error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "qgraph: " << e.what() << "\n";
        return 1;
    }
}
