// SPDX-License-Identifier: Apache-2.0
//
// Serial reference vs OpenMP path for the hot loops. Arg 0 selects the path
// (0 serial, 1 parallel), arg 1 is the element count.
#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "squint/combine.hpp"
#include "squint/kernels.hpp"
#include "squint/txrx.hpp"
#include "squint/wavefront.hpp"

using namespace squint;
using dsp::cplx;

namespace {

Exec exec_of(const benchmark::State& st)
{
    return st.range(0) == 0 ? Exec::Serial : Exec::Parallel;
}

std::vector<cplx> noise(std::size_t n, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    std::vector<cplx> x(n);
    for (auto& v : x) v = {g(rng), g(rng)};
    return x;
}

std::vector<cplx> guarded_noise(std::size_t n, std::size_t guard, std::uint64_t seed)
{
    auto x = noise(n, seed);
    std::fill(x.begin(), x.begin() + static_cast<long>(guard), cplx{});
    std::fill(x.end() - static_cast<long>(guard), x.end(), cplx{});
    return x;
}

void BM_WeightedSum(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(1));
    std::vector<std::vector<cplx>> streams;
    for (std::size_t k = 0; k < n; ++k) streams.push_back(noise(1 << 16, k));
    const auto w = noise(n, 99);
    std::vector<cplx> out(1 << 16);
    for (auto _ : st) {
        kernels::weighted_sum(streams, w, 1.0 / n, out, exec_of(st));
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * static_cast<long>(n) * (1 << 16));
}

void BM_CombineTones(benchmark::State& st)
{
    const auto n = static_cast<std::size_t>(st.range(1));
    const std::size_t symbols = 200, tones = 128;
    std::vector<std::vector<cplx>> grids;
    for (std::size_t k = 0; k < n; ++k) grids.push_back(noise(symbols * tones, k));
    const auto w = noise(tones * n, 7);
    for (auto _ : st) {
        auto out = kernels::combine_tones(grids, w, symbols, tones, 1.0 / n, exec_of(st));
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_Propagate(benchmark::State& st)
{
    const analytic::ArrayConfig c{static_cast<int>(st.range(1)), 0.5, 0.5};
    const dsp::ComplexSignal tx{guarded_noise(1 << 15, 512, 1), 8};
    for (auto _ : st) {
        auto s = wavefront::propagate(tx, c, 1.6, exec_of(st));
        benchmark::DoNotOptimize(s.streams.data());
    }
}

void BM_FullIdft(benchmark::State& st)
{
    const analytic::ArrayConfig c{static_cast<int>(st.range(1)), 0.5, 0.5};
    txrx::OfdmSpec o;
    o.m_carriers = 128;
    const auto s = wavefront::propagate({guarded_noise(1 << 14, 512, 2), 4}, c, 0.8);
    for (auto _ : st) {
        auto y = combine::full_idft_combine(s, 0.2, o, exec_of(st));
        benchmark::DoNotOptimize(y.data());
    }
}

void BM_RunOfdm(benchmark::State& st)
{
    const analytic::ArrayConfig c{static_cast<int>(st.range(1)), 0.5, 0.5};
    dsp::SignalSpec sig;
    txrx::OfdmSpec o;
    o.m_carriers = 128;
    o.n_ofdm_symbols = 200;
    for (auto _ : st) {
        auto r = txrx::run_ofdm(c, sig, o, 20.0, {combine::CombinerKind::FullIdft, {}, {}}, exec_of(st));
        benchmark::DoNotOptimize(r.overall_evm_db);
    }
}

void BM_RunSingleCarrier(benchmark::State& st)
{
    const analytic::ArrayConfig c{static_cast<int>(st.range(1)), 0.5, 0.5};
    dsp::SignalSpec sig;
    sig.n_symbols = 4000;
    for (auto _ : st) {
        auto r = txrx::run_single_carrier(c, sig, 20.0, {}, exec_of(st));
        benchmark::DoNotOptimize(r.overall_evm_db);
    }
}

void args(benchmark::internal::Benchmark* b)
{
    b->ArgNames({"parallel", "n"});
    for (long n : {8, 64}) {
        b->Args({0, n});
        b->Args({1, n});
    }
    b->Unit(benchmark::kMillisecond)->UseRealTime();
}

} // namespace

BENCHMARK(BM_WeightedSum)->Apply(args);
BENCHMARK(BM_CombineTones)->Apply(args);
BENCHMARK(BM_Propagate)->Apply(args);
BENCHMARK(BM_FullIdft)->Apply(args);
BENCHMARK(BM_RunOfdm)->Apply(args);
BENCHMARK(BM_RunSingleCarrier)->Apply(args);

BENCHMARK_MAIN();
