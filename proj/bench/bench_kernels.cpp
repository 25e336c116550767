// Serial reference kernels against their OpenMP counterparts, and the
// trajectory ensemble with and without threads. Set JUMPFORGE_THREADS or
// OMP_NUM_THREADS to change the thread count of the parallel variants.

#include <random>

#include <benchmark/benchmark.h>

#include "jumpforge/ensemble.hpp"
#include "jumpforge/protocols.hpp"
#include "jumpforge/qstate.hpp"
#include "jumpforge/trajectory.hpp"

using namespace jumpforge;

namespace {

std::vector<cplx> random_amplitudes(int n) {
    std::mt19937_64 g(1);
    std::normal_distribution<double> d;
    std::vector<cplx> v(std::size_t{1} << n);
    for (auto& a : v) a = {d(g), d(g)};
    return v;
}

kernels::TermMasks sample_term(int n) {
    const PauliTerm term(0.5, {{0, Op1::X}, {n / 2, Op1::Y}, {n - 1, Op1::Z}});
    return kernels::term_masks(term, n);
}

template <bool Parallel>
void BM_accumulate_term(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const auto in = random_amplitudes(n);
    std::vector<cplx> out(in.size());
    const auto masks = sample_term(n);
    for (auto _ : state) {
        if constexpr (Parallel)
            kernels::accumulate_term_parallel(in, out, masks);
        else
            kernels::accumulate_term_serial(in, out, masks);
        benchmark::DoNotOptimize(out.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(in.size()));
}

template <bool Parallel>
void BM_norm_squared(benchmark::State& state) {
    const auto v = random_amplitudes(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const double r = Parallel ? kernels::norm_squared_parallel(v) : kernels::norm_squared_serial(v);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(v.size()));
}

template <bool Parallel>
void BM_inner(benchmark::State& state) {
    const auto a = random_amplitudes(static_cast<int>(state.range(0)));
    const auto b = random_amplitudes(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        const cplx r = Parallel ? kernels::inner_parallel(a, b) : kernels::inner_serial(a, b);
        benchmark::DoNotOptimize(r);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(a.size()));
}

template <bool Parallel>
void BM_teleport_ensemble(benchmark::State& state) {
    const auto script = teleport_script(0.6, cplx(0.0, 0.8), 1.0, 20.0);
    const auto n = static_cast<std::size_t>(state.range(0));
    auto one = [&](std::size_t i) {
        RngStream rng(3, i);
        return run(script, rng).log.clicks.size();
    };
    for (auto _ : state) {
        const auto clicks = Parallel ? map_indexed(n, one) : map_indexed_serial(n, one);
        benchmark::DoNotOptimize(clicks.data());
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n));
}

}  // namespace

BENCHMARK(BM_accumulate_term<false>)->Name("accumulate_term/serial")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(BM_accumulate_term<true>)->Name("accumulate_term/parallel")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(BM_norm_squared<false>)->Name("norm_squared/serial")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(BM_norm_squared<true>)->Name("norm_squared/parallel")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(BM_inner<false>)->Name("inner/serial")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(BM_inner<true>)->Name("inner/parallel")->Arg(16)->Arg(20)->Arg(22);
BENCHMARK(BM_teleport_ensemble<false>)->Name("teleport_ensemble/serial")->Arg(1000);
BENCHMARK(BM_teleport_ensemble<true>)->Name("teleport_ensemble/parallel")->Arg(1000);

BENCHMARK_MAIN();
