#include <gtest/gtest.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

Result run_cli(const std::string& args) {
    const std::string cmd = std::string(QGRAPH_CLI) + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string fixture(const std::string& name) { return std::string(QGRAPH_FIXTURES_DIR) + "/" + name; }

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "qgraph_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Cli, RunsFixture) {
    const Result r = run_cli("run " + fixture("tau.json"));
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\"certified\""), std::string::npos);
}

TEST(Cli, ByteIdenticalAcrossThreadCounts) {
    const Result a = run_cli("run " + fixture("intermediate.json") + " --threads 1");
    const Result b = run_cli("run " + fixture("intermediate.json") + " --threads 4");
    const Result c = run_cli("run " + fixture("intermediate.json"));
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, c.out);
}

TEST(Cli, CsvFormat) {
    const Result r = run_cli("run " + fixture("dirichlet.json") + " --format csv");
    EXPECT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "re_lambda,im_lambda,winding_multiplicity,geometric_multiplicity,status");
    std::getline(in, line);
    EXPECT_EQ(line, "1,0,1,1,eigenvalue");
}

TEST(Cli, OutDirectoryAndPlotdata) {
    const fs::path dir = scratch("out");
    fs::remove_all(dir);
    const Result r = run_cli("run " + fixture("dirichlet.json") + " --format plotdata --out " + dir.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    EXPECT_TRUE(fs::exists(dir / "dirichlet.plot.json"));
}

TEST(Cli, RegionOverride) {
    const Result r = run_cli("run " + fixture("dirichlet.json") + " --format csv --region 3.5,2");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 4);
}

TEST(Cli, InputErrorsExitTwo) {
    EXPECT_EQ(run_cli("run /nonexistent.json").code, 2);
    EXPECT_EQ(run_cli("run " + fixture("tau.json") + " --format xml").code, 2);
    EXPECT_EQ(run_cli("run " + fixture("tau.json") + " --region 3").code, 2);
    EXPECT_EQ(run_cli("run " + fixture("tau.json") + " --tol -1").code, 2);
    EXPECT_EQ(run_cli("").code, 2);
    const fs::path bad = scratch("bad.json");
    std::ofstream(bad) << R"({"bc": {"preset": "tau"}})";
    EXPECT_EQ(run_cli("run " + bad.string()).code, 2);
}

TEST(Cli, TaskFailureExitsOne) {
    const fs::path p = scratch("pole.json");
    std::ofstream(p) << R"({"graph": {"builtin": "interval", "length": 3.141592653589793},
        "bc": {"preset": "dirichlet"}, "tasks": ["classify", {"type": "resolvent", "k": 2}]})";
    EXPECT_EQ(run_cli("run " + p.string()).code, 1);
}
