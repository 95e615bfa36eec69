#include <benchmark/benchmark.h>

#include "ccrbudget/budget.hpp"
#include "ccrbudget/random_network.hpp"
#include "ccrbudget/scenarios.hpp"
#include "ccrbudget/steady_state.hpp"

using namespace ccrb;

namespace {

StateSpace network_of_size(std::size_t n, bool passive) {
    RandomNetworkGenerator gen(7 + n);
    RandomNetworkOptions o;
    o.min_modes = o.max_modes = n;
    o.passive = passive;
    o.detuning_max = 1.0;
    return build_state_space(gen.network(o));
}

void BM_Lyapunov(benchmark::State& state) {
    const StateSpace ss = network_of_size(static_cast<std::size_t>(state.range(0)), false);
    const CMatrix q = ss.input * ss.sigma * ss.input.adjoint();
    for (auto _ : state) benchmark::DoNotOptimize(solve_lyapunov(ss.drift, q));
}
BENCHMARK(BM_Lyapunov)->DenseRange(1, 5);

void BM_ComputeBudget(benchmark::State& state) {
    const StateSpace ss = network_of_size(static_cast<std::size_t>(state.range(0)), false);
    for (auto _ : state) benchmark::DoNotOptimize(compute_budget(ss));
}
BENCHMARK(BM_ComputeBudget)->DenseRange(1, 5);

void BM_BudgetViaSpectrum(benchmark::State& state) {
    const StateSpace ss = network_of_size(static_cast<std::size_t>(state.range(0)), false);
    for (auto _ : state) benchmark::DoNotOptimize(budget_via_spectrum(ss, 1e-9));
}
BENCHMARK(BM_BudgetViaSpectrum)->DenseRange(1, 5)->Unit(benchmark::kMillisecond);

void BM_SteadyCovariance(benchmark::State& state) {
    const StateSpace ss = network_of_size(static_cast<std::size_t>(state.range(0)), true);
    const InputMoments in = InputMoments::vacuum(ss.n_modes());
    for (auto _ : state) benchmark::DoNotOptimize(steady_covariance(ss, in));
}
BENCHMARK(BM_SteadyCovariance)->DenseRange(1, 5);

void BM_DuanQuantity(benchmark::State& state) {
    ThreeModeParams p;
    p.g_script = 1.0;
    p.xi = 0.5;
    for (auto _ : state) benchmark::DoNotOptimize(duan_quantity(p));
}
BENCHMARK(BM_DuanQuantity);

}  // namespace
BENCHMARK_MAIN();
