#include <benchmark/benchmark.h>

#include <cmath>

#include "qgraph/presets.hpp"
#include "qgraph/resolvent.hpp"
#include "qgraph/spectrum.hpp"

using namespace qgraph;

namespace {

const double kPi = std::acos(-1.0);

SecularSystem cube_standard() {
    const Preset p = make_preset("standard", {}, graphs::cube(1.0));
    return SecularSystem(p.graph, p.bc);
}

}  // namespace

static void BM_CubeLogDet(benchmark::State& state) {
    const SecularSystem sys = cube_standard();
    const cplx k{1.3, 0.7};
    for (auto _ : state) benchmark::DoNotOptimize(sys.log_det_Z(k));
}
BENCHMARK(BM_CubeLogDet);

static void BM_CubeDlogDet(benchmark::State& state) {
    const SecularSystem sys = cube_standard();
    const cplx k{1.3, 0.7};
    for (auto _ : state) benchmark::DoNotOptimize(sys.dlog_det_Z(k));
}
BENCHMARK(BM_CubeDlogDet);

// Dirichlet interval of length pi, region Re k, Im k up to the argument.
static void BM_IntervalEigenvalues(benchmark::State& state) {
    const SecularSystem sys(graphs::interval(kPi), local::dirichlet(2));
    SpectrumOptions opts;
    opts.re_max = static_cast<double>(state.range(0)) + 0.5;
    opts.im_max = 5.0;
    for (auto _ : state) benchmark::DoNotOptimize(find_eigenvalues(sys, opts));
}
BENCHMARK(BM_IntervalEigenvalues)->Arg(10)->Arg(40)->Unit(benchmark::kMillisecond);

static void BM_IntervalEigenvaluesThreads(benchmark::State& state) {
    const SecularSystem sys(graphs::interval(kPi), local::dirichlet(2));
    SpectrumOptions opts;
    opts.re_max = 40.5;
    opts.im_max = 5.0;
    opts.roots.threads = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(find_eigenvalues(sys, opts));
}
BENCHMARK(BM_IntervalEigenvaluesThreads)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

static void BM_ResolventEntry(benchmark::State& state) {
    PresetParams p;
    p.tau = 0.4;
    const Preset tau = make_preset("tau", p, std::nullopt);
    const ResolventKernel r(SecularSystem(tau.graph, tau.bc), cplx{0.5, 2.0});
    for (auto _ : state) benchmark::DoNotOptimize(r.entry({0, 0.3}, {1, 0.7}));
}
BENCHMARK(BM_ResolventEntry);

static void BM_ResolventBuild(benchmark::State& state) {
    const SecularSystem sys = cube_standard();
    for (auto _ : state) benchmark::DoNotOptimize(ResolventKernel(sys, cplx{0.5, 2.0}));
}
BENCHMARK(BM_ResolventBuild);
BENCHMARK_MAIN();
