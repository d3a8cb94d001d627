#include <benchmark/benchmark.h>

#include "kg/classifier.hpp"
#include "kg/integrator.hpp"
#include "kg/ode.hpp"
#include "kg/spectral.hpp"

namespace {

void BM_Rhs(benchmark::State& state) {
    const kg::GridSpec grid{static_cast<std::size_t>(state.range(0)), 2};
    kg::SpectralOperator op(grid);
    const auto p = kg::make_params(-0.25, 1.0, 1.0);
    const auto s = kg::initial_state(0.1, 1.0, grid);
    std::vector<double> du(grid.n), dv(grid.n);
    for (auto _ : state) {
        op.rhs(s, p, du, dv);
        benchmark::DoNotOptimize(dv.data());
    }
}
BENCHMARK(BM_Rhs)->Arg(64)->Arg(256)->Arg(1024);

void BM_CubicDealiased(benchmark::State& state) {
    const kg::GridSpec grid{static_cast<std::size_t>(state.range(0)), 2};
    kg::SpectralOperator op(grid);
    const auto s = kg::initial_state(0.1, 1.0, grid);
    for (auto _ : state) benchmark::DoNotOptimize(op.cubic_dealiased(s.u));
}
BENCHMARK(BM_CubicDealiased)->Arg(64)->Arg(256);

void BM_IrkStep(benchmark::State& state) {
    const auto p = kg::make_params(-0.25, 1.0, 1.0);
    kg::PdeIntegrator integ({}, kg::IRKScheme::gauss_legendre(static_cast<int>(state.range(0))), p);
    auto s = kg::initial_state(0.1, 1.0, {});
    for (auto _ : state) {
        integ.step(s, 0.0625);
        benchmark::DoNotOptimize(s.u.data());
    }
    state.counters["stage_iters"] = integ.last_iterations();
}
BENCHMARK(BM_IrkStep)->Arg(2)->Arg(3);

void BM_OdeStep(benchmark::State& state) {
    kg::OdeIntegrator integ(kg::IRKScheme::gauss_legendre(2), 1.0);
    kg::OdeState s{0.0, 1.3, 0.0};
    for (auto _ : state) {
        integ.step(s, 0.0625);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_OdeStep);

void BM_ClassifyDeskJob(benchmark::State& state) {
    const double mu = 0.015625;
    const auto p = kg::params_from_alpha_exp(-8, mu);
    const auto init = kg::initial_state(kg::amplitude_from_normalized(0.9, mu), mu, {});
    for (auto _ : state) benchmark::DoNotOptimize(kg::classify_pde(init, p, {}, 256.0));
}
BENCHMARK(BM_ClassifyDeskJob)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
