// Serial reference kernels against their OpenMP counterparts.

#include <benchmark/benchmark.h>

#include <cmath>

#include "prony/kernels.hpp"
#include "prony/model.hpp"
#include "prony/pencil.hpp"
#include "prony/randsphere.hpp"

using namespace prony;

namespace {

const ParameterSet& sources() {
    static const ParameterSet p = random_params(8, 2, 1, {.min_sep = 0.4});
    return p;
}

template <void (*Render)(const ParameterSet&, double, int, ImageGrid&)>
void BM_Render(benchmark::State& state) {
    ImageGrid img(2, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        Render(sources(), 150.0, 1, img);
        benchmark::DoNotOptimize(img.pixels.data());
    }
}

template <void (*Dft)(const ImageGrid&, SampleTable&)>
void BM_Dft(benchmark::State& state) {
    const int P = static_cast<int>(state.range(0));
    ImageGrid img(2, P);
    for (std::size_t i = 0; i < img.size(); ++i) img.pixels[i] = std::sin(0.01 * static_cast<double>(i));
    SampleTable out(2, 4);
    for (auto _ : state) {
        Dft(img, out);
        benchmark::DoNotOptimize(out.values().data());
    }
}

template <kernels::GapTally (*Trials)(const Eigen::MatrixXcd&, double, std::uint64_t, std::uint64_t)>
void BM_GapTrials(benchmark::State& state) {
    const Eigen::MatrixXcd z = sources().nodes();
    Eigen::MatrixXcd diffs(28, 2);
    int r = 0;
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) diffs.row(r++) = z.row(i) - z.row(j);
    for (auto _ : state) benchmark::DoNotOptimize(Trials(diffs, 0.05, static_cast<std::uint64_t>(state.range(0)), 3));
}

template <std::vector<double> (*Grid)(std::span<const Eigen::VectorXcd>, const kernels::GapFunction&)>
void BM_GapGrid(benchmark::State& state) {
    const ParameterSet p = random_params(5, 2, 2);
    const auto pm = assemble_pencil_matrices(sample_grid(p, 4), GridOrder(2, 4));
    const auto S = build_pencil(reduced_svd_rank(pm.T), pm.shifts);
    std::vector<Eigen::VectorXcd> dirs;
    const int n = static_cast<int>(state.range(0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < 2 * n; ++j)
            dirs.push_back(gap_map_direction(GapMapMode::hopf_d2, M_PI * (i + 0.5) / n, M_PI * j / n));
    const kernels::GapFunction f = [&](const Eigen::VectorXcd& mu) {
        return min_pairwise_gap(eig_general(combine_pencil(S, mu)).values);
    };
    for (auto _ : state) benchmark::DoNotOptimize(Grid(dirs, f));
}

}  // namespace

BENCHMARK(BM_Render<kernels::serial::render_gaussians>)->Name("render/serial")->Arg(31)->Arg(128);
BENCHMARK(BM_Render<kernels::omp::render_gaussians>)->Name("render/omp")->Arg(31)->Arg(128);
BENCHMARK(BM_Dft<kernels::serial::dft>)->Name("dft/serial")->Arg(31)->Arg(128);
BENCHMARK(BM_Dft<kernels::omp::dft>)->Name("dft/omp")->Arg(31)->Arg(128);
BENCHMARK(BM_GapTrials<kernels::serial::gap_trials>)->Name("gap_trials/serial")->Arg(100000);
BENCHMARK(BM_GapTrials<kernels::omp::gap_trials>)->Name("gap_trials/omp")->Arg(100000);
BENCHMARK(BM_GapGrid<kernels::serial::gap_grid>)->Name("gap_grid/serial")->Arg(40);
BENCHMARK(BM_GapGrid<kernels::omp::gap_grid>)->Name("gap_grid/omp")->Arg(40);

BENCHMARK_MAIN();
