#include <benchmark/benchmark.h>

#include <cmath>
#include <complex>

#include "schottky/lattice.hpp"
#include "schottky/words.hpp"
#include "schottky/zeta.hpp"

using namespace schottky;

namespace {

const SchottkyGroup& sym_group() {
    static SchottkyGroup g = symmetric_group(2, 0.45);
    return g;
}

// Prime-class tables are memoized per group, so each iteration starts from a
// fresh group to time the enumeration itself.
void BM_PrimeClassTables(benchmark::State& state) {
    const int depth = int(state.range(0));
    for (auto _ : state) {
        state.PauseTiming();
        SchottkyGroup g = symmetric_group(2, 0.45);
        state.ResumeTiming();
        benchmark::DoNotOptimize(prime_classes(g, depth).total_classes());
    }
}
BENCHMARK(BM_PrimeClassTables)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_TransferMatrixBuild(benchmark::State& state) {
    const int order = int(state.range(0));
    const cplx s(0.4, 2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(build_transfer_matrix(sym_group(), s, order).matrix.sum());
}
BENCHMARK(BM_TransferMatrixBuild)->Arg(32)->Arg(64)->Arg(103)->Unit(benchmark::kMillisecond);

void BM_FredholmDeterminant(benchmark::State& state) {
    const int order = int(state.range(0));
    const cplx s(0.4, 2.0);
    for (auto _ : state)
        benchmark::DoNotOptimize(zeta_fredholm(sym_group(), s, order).value);
}
BENCHMARK(BM_FredholmDeterminant)->Arg(32)->Arg(64)->Arg(103)->Unit(benchmark::kMillisecond);

void BM_CycleExpansion(benchmark::State& state) {
    const int n = int(state.range(0));
    const cplx s(0.4, 2.0);
    SchottkyGroup g = symmetric_group(2, 0.45);
    prime_classes(g, n);  // tables built once; time the cumulant assembly
    for (auto _ : state) benchmark::DoNotOptimize(zeta_cycle(g, s, n).value);
}
BENCHMARK(BM_CycleExpansion)->Arg(8)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_OrbitCount(benchmark::State& state) {
    const double T = double(state.range(0));
    const HPoint o{cplx(0.0, 0.0), Model::Disc};
    for (auto _ : state)
        benchmark::DoNotOptimize(orbit_count(sym_group(), o, o, T).count);
}
BENCHMARK(BM_OrbitCount)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
