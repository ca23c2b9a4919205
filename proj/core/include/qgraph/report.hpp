#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qgraph/problem.hpp"
#include "qgraph/roots.hpp"
#include "qgraph/secular.hpp"

namespace qgraph {

std::string version();

struct RunConfig {
    std::optional<std::pair<double, double>> region;  // overrides every task region
    std::optional<double> tol;
    int threads = 1;
};

struct EigenRow {
    cplx k;
    cplx lambda;
    int winding = 0;
    int geometric = 0;
    std::string status;
};

struct Report {
    std::string json;               // full report, deterministic
    std::vector<EigenRow> eigen_rows;  // points of the first spectrum task
    std::optional<SecularSystem> system;
    Rect plot_region;
    std::vector<std::pair<std::string, std::string>> extra_files;  // file name, contents
    int tasks_total = 0;
    int tasks_failed = 0;

    int exit_code() const { return tasks_failed > 0 ? 1 : 0; }
};

// Classification first, then the tasks in file order. Task failures are
// recorded in the report, never thrown.
Report run(const ProblemFile& problem, const RunConfig& config = {});

// Eigenvalue table: re_lambda, im_lambda, winding_multiplicity,
// geometric_multiplicity, status.
std::string emit_csv(const Report& report);

// Zero locations and |det Z| on an n x n grid over the plot region.
std::string emit_plotdata(const Report& report, int n = 100);

}  // namespace qgraph
