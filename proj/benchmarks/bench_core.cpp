#include <benchmark/benchmark.h>

#include "oalab/builtin.hpp"
#include "oalab/gns.hpp"
#include "oalab/probability.hpp"
#include "oalab/random_matrices.hpp"
#include "oalab/reduction.hpp"

namespace {

using namespace oalab;

void BM_CstarNorm(benchmark::State& state) {
    RandomStream rng(1);
    const DynamicalVariable u(random_ginibre(rng, state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cstar_norm(u));
    }
}
BENCHMARK(BM_CstarNorm)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

void BM_JordanProduct(benchmark::State& state) {
    RandomStream rng(2);
    const Observable a(random_hermitian(rng, state.range(0)));
    const Observable b(random_hermitian(rng, state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(jordan_product(a, b));
    }
}
BENCHMARK(BM_JordanProduct)->Arg(8)->Arg(32)->Arg(64);

void BM_MasaFromFamily(benchmark::State& state) {
    RandomStream rng(3);
    const CommutingFamily family({Observable(random_hermitian(rng, state.range(0)))});
    std::uint64_t seed = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(masa_from_family("bench", family, ++seed));
    }
}
BENCHMARK(BM_MasaFromFamily)->Arg(4)->Arg(8)->Arg(16);

void BM_SampleEnsemble(benchmark::State& state) {
    RandomStream rng(4);
    DeviceRegistry registry;
    registry.add(masa_from_family(
        "z", CommutingFamily({Observable(random_hermitian(rng, 4))}), 1));
    registry.add(masa_from_family(
        "x", CommutingFamily({Observable(random_hermitian(rng, 4))}), 2));
    const QuantumState s(random_density(rng, 4, 4));
    const std::size_t draws = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(sample_ensemble(s, registry, 7, draws));
    }
    state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                            static_cast<std::int64_t>(draws));
}
BENCHMARK(BM_SampleEnsemble)->Arg(1000)->Arg(10000);

void BM_BuildGns(benchmark::State& state) {
    RandomStream rng(5);
    const Eigen::Index n = state.range(0);
    const QuantumState psi(random_density(rng, n, n));
    for (auto _ : state) {
        benchmark::DoNotOptimize(build_gns(n, psi));
    }
}
BENCHMARK(BM_BuildGns)->Arg(2)->Arg(3)->Arg(4)->Arg(6);

void BM_Collapse(benchmark::State& state) {
    RandomStream rng(6);
    const Eigen::Index n = state.range(0);
    const QuantumState psi(random_density(rng, n, n));
    const Matrix u = random_unitary(rng, n);
    Matrix p = Matrix::Zero(n, n);
    for (Eigen::Index k = 0; k < n / 2; ++k) {
        p += u.col(k) * u.col(k).adjoint();
    }
    const Projector projector(p);
    for (auto _ : state) {
        benchmark::DoNotOptimize(collapse(psi, projector));
    }
}
BENCHMARK(BM_Collapse)->Arg(8)->Arg(32);

void BM_SpectralProjector(benchmark::State& state) {
    RandomStream rng(7);
    const Observable a(random_hermitian(rng, state.range(0)));
    const IntervalUnion window({{0.0, 10.0}});
    for (auto _ : state) {
        benchmark::DoNotOptimize(spectral_projector(a, window));
    }
}
BENCHMARK(BM_SpectralProjector)->Arg(8)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
