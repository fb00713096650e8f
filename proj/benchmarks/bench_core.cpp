#include <benchmark/benchmark.h>

#include "dcelab/dynamics.hpp"
#include "dcelab/expansion.hpp"
#include "dcelab/stability.hpp"

using namespace dce;

namespace {

ModelConfig config(int n) {
    ModelConfig c;
    c.k_modes = n;
    c.n_order = n;
    c.epsilon = n == 6 ? 0.02 : 0.45;
    return c;
}

void BM_GenerateEom(benchmark::State& state) {
    const auto cfg = config(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(generate_eom(cfg));
    }
}
BENCHMARK(BM_GenerateEom)->DenseRange(1, 6);

void BM_RhsApply(benchmark::State& state) {
    const TimeDependentSystem rhs(generate_eom(config(static_cast<int>(state.range(0)))));
    std::vector<std::complex<double>> v(static_cast<std::size_t>(rhs.dim()), {1e-3, 2e-4}), dv(v.size());
    double t = 0.0;
    for (auto _ : state) {
        rhs.apply(t, v, dv);
        t += 0.01;
        benchmark::DoNotOptimize(dv.data());
    }
}
BENCHMARK(BM_RhsApply)->Arg(3)->Arg(6);

void BM_MaxRealEigenvalue(benchmark::State& state) {
    const auto cfg = config(static_cast<int>(state.range(0)));
    const auto ls = assemble_linear_system(rwa_filter(generate_eom(cfg), cfg.n_order));
    for (auto _ : state) {
        benchmark::DoNotOptimize(max_real_eigenvalue(ls));
    }
}
BENCHMARK(BM_MaxRealEigenvalue)->DenseRange(1, 6);

void BM_RwaPropagation(benchmark::State& state) {
    const auto cfg = config(3);
    const auto ls = assemble_linear_system(rwa_filter(generate_eom(cfg), 3));
    const auto init = InitialState::seeded(3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_rwa(ls, init, 1400.0, static_cast<std::size_t>(state.range(0))));
    }
}
BENCHMARK(BM_RwaPropagation)->Arg(100)->Arg(2000);

void BM_FullIntegrationShort(benchmark::State& state) {
    const auto sys = generate_eom(config(3));
    const auto init = InitialState::seeded(3);
    IntegrationOptions opts;
    opts.samples = 100;
    for (auto _ : state) {
        benchmark::DoNotOptimize(integrate_full(sys, init, 100.0, opts));
    }
}
BENCHMARK(BM_FullIntegrationShort);

}  // namespace

BENCHMARK_MAIN();
