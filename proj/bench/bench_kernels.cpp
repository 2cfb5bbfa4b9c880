// Serial reference vs OpenMP implementations of the three hot kernels, at
// the problem sizes the desk-scale link actually runs: a ~250-mode band
// evaluated on a 512-bin grid, banded warping distances over ~100 frame
// pairs of ~400 occupied bins, and the quadratures behind the moving-wall
// frequency shift. Thread count follows OMP_NUM_THREADS.

#include <cmath>
#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "cavitymod/constants.hpp"
#include "cavitymod/eigenmode.hpp"
#include "cavitymod/kernels.hpp"

using namespace cavitymod;

namespace {

EigenmodeEnsemble desk_ensemble() {
    CavityGeometry geom;
    geom.volume = 1.0;
    geom.tau = 1e-6;
    const double lo = kTwoPi * (3.3e9 - 12.5e6);
    const double hi = kTwoPi * (3.3e9 + 12.5e6);
    return sample_ensemble(12, geom, lo, hi, 1.0);
}

std::vector<double> desk_grid(std::size_t n) {
    std::vector<double> grid(n);
    const double lo = kTwoPi * (3.3e9 - 12.5e6);
    const double hi = kTwoPi * (3.3e9 + 12.5e6);
    for (std::size_t i = 0; i < n; ++i) {
        grid[i] = lo + (hi - lo) * static_cast<double>(i) /
                           static_cast<double>(n - 1);
    }
    return grid;
}

std::vector<std::vector<double>> random_spectra(std::size_t count,
                                                std::size_t length) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    std::vector<std::vector<double>> seqs(count);
    for (auto& s : seqs) {
        s.resize(length);
        for (auto& v : s) v = u(rng);
    }
    return seqs;
}

void bench_transfer_serial(benchmark::State& state) {
    const auto ens = desk_ensemble();
    const auto grid = desk_grid(static_cast<std::size_t>(state.range(0)));
    std::vector<kernels::cplx> out(grid.size());
    for (auto _ : state) {
        kernels::transfer_function_serial(ens.modes, 1.0, grid, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(grid.size()));
}

void bench_transfer_parallel(benchmark::State& state) {
    const auto ens = desk_ensemble();
    const auto grid = desk_grid(static_cast<std::size_t>(state.range(0)));
    std::vector<kernels::cplx> out(grid.size());
    for (auto _ : state) {
        kernels::transfer_function_parallel(ens.modes, 1.0, grid, out);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(grid.size()));
}

void bench_dtw_serial(benchmark::State& state) {
    const auto pairs = static_cast<std::size_t>(state.range(0));
    const auto a = random_spectra(pairs, 410);
    const auto b = random_spectra(pairs, 410);
    for (auto _ : state) {
        auto d = kernels::pairwise_dtw_serial(a, b, 1);
        benchmark::DoNotOptimize(d.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(pairs));
}

void bench_dtw_parallel(benchmark::State& state) {
    const auto pairs = static_cast<std::size_t>(state.range(0));
    const auto a = random_spectra(pairs, 410);
    const auto b = random_spectra(pairs, 410);
    for (auto _ : state) {
        auto d = kernels::pairwise_dtw_parallel(a, b, 1);
        benchmark::DoNotOptimize(d.data());
    }
    state.SetItemsProcessed(state.iterations() *
                            static_cast<std::int64_t>(pairs));
}

double wall_integrand(double x, double z) {
    return std::sin(kPi * x / 2.0) * std::sin(kPi * x / 2.0) *
           std::cos(kPi * z / 4.0) * std::cos(kPi * z / 4.0);
}

void bench_quadrature2d_serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const double v = kernels::quadrature_2d_serial(wall_integrand, 0.0,
                                                       2.0, 0.0, 4.0, n, n);
        benchmark::DoNotOptimize(v);
    }
}

void bench_quadrature2d_parallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const double v = kernels::quadrature_2d_parallel(wall_integrand, 0.0,
                                                         2.0, 0.0, 4.0, n, n);
        benchmark::DoNotOptimize(v);
    }
}

double energy_integrand(double x, double y, double z) {
    const double e = std::sin(kPi * x / 2.0) * std::cos(kPi * z / 4.0);
    return e * e + 0.1 * y;
}

void bench_quadrature3d_serial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const double v = kernels::quadrature_3d_serial(
            energy_integrand, 0.0, 2.0, 0.0, 2.0, 0.0, 4.0, n, n, n);
        benchmark::DoNotOptimize(v);
    }
}

void bench_quadrature3d_parallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        const double v = kernels::quadrature_3d_parallel(
            energy_integrand, 0.0, 2.0, 0.0, 2.0, 0.0, 4.0, n, n, n);
        benchmark::DoNotOptimize(v);
    }
}

}  // namespace

BENCHMARK(bench_transfer_serial)->Arg(512)->Arg(2048);
BENCHMARK(bench_transfer_parallel)->Arg(512)->Arg(2048);
BENCHMARK(bench_dtw_serial)->Arg(32)->Arg(128);
BENCHMARK(bench_dtw_parallel)->Arg(32)->Arg(128);
BENCHMARK(bench_quadrature2d_serial)->Arg(256)->Arg(1024);
BENCHMARK(bench_quadrature2d_parallel)->Arg(256)->Arg(1024);
BENCHMARK(bench_quadrature3d_serial)->Arg(64)->Arg(128);
BENCHMARK(bench_quadrature3d_parallel)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
