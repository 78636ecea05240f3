// Serial versus OpenMP kernels: sparse matvec on an ED Hamiltonian and the
// mean-field grid evaluation.

#include "mdicke/ed.hpp"
#include "mdicke/scan.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace mdicke;

namespace {

CsrMatrix hamiltonian(int atoms)
{
    const auto ref = raman_scheme_model(3);
    const SymmetricBasis b(atoms, 3, 64);
    return assemble_hamiltonian(ref.model.expand(), ref.params, b).to_csr();
}

void bm_spmv_serial(benchmark::State& st)
{
    const CsrMatrix a = hamiltonian(static_cast<int>(st.range(0)));
    std::vector<double> x(a.rows, 1.0), y(a.rows);
    for (auto _ : st) {
        kernels::spmv_serial(a, x.data(), y.data());
        benchmark::DoNotOptimize(y.data());
    }
    st.counters["dim"] = static_cast<double>(a.rows);
}

void bm_spmv_omp(benchmark::State& st)
{
    const CsrMatrix a = hamiltonian(static_cast<int>(st.range(0)));
    std::vector<double> x(a.rows, 1.0), y(a.rows);
    for (auto _ : st) {
        kernels::spmv_omp(a, x.data(), y.data(), static_cast<int>(st.range(1)));
        benchmark::DoNotOptimize(y.data());
    }
    st.counters["dim"] = static_cast<double>(a.rows);
}

std::vector<ScanAxis> grid_axes(int points)
{
    const std::string n = std::to_string(points);
    return {parse_axis("h22:1:3:" + n, 4), parse_axis("h33:2:4:" + n, 4)};
}

void bm_grid_serial(benchmark::State& st)
{
    const auto axes = grid_axes(static_cast<int>(st.range(0)));
    const AtomModel m = raman_scheme_model(4).model.expand();
    std::vector<ScanPoint> out(axes[0].points * axes[1].points);
    for (auto _ : st) {
        kernels::evaluate_grid_serial(m, 1.0, axes, {}, out);
        benchmark::DoNotOptimize(out.data());
    }
}

void bm_grid_omp(benchmark::State& st)
{
    const auto axes = grid_axes(static_cast<int>(st.range(0)));
    const AtomModel m = raman_scheme_model(4).model.expand();
    std::vector<ScanPoint> out(axes[0].points * axes[1].points);
    for (auto _ : st) {
        kernels::evaluate_grid_omp(m, 1.0, axes, {}, out, static_cast<int>(st.range(1)));
        benchmark::DoNotOptimize(out.data());
    }
}

}  // namespace

BENCHMARK(bm_spmv_serial)->Arg(16)->Arg(64)->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_spmv_omp)->Args({16, 1})->Args({64, 1})->Args({64, 8})->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_grid_serial)->Arg(50)->Unit(benchmark::kMillisecond);
BENCHMARK(bm_grid_omp)->Args({50, 1})->Args({50, 8})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
