// Serial reference against the OpenMP kernels: the network merge of an
// N x K posterior bank and the Monte Carlo run loop.

#include "decbandit/engine.hpp"
#include "decbandit/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace decbandit;

namespace {

constexpr std::size_t kArms = 17;

Topology topology_for(int code, std::size_t n)
{
    switch (code) {
    case 0:
        return Topology::complete(n);
    case 1:
        return Topology::k_regular(n, 3);
    default:
        return Topology::cycle(n);
    }
}

std::vector<BetaPosterior> random_bank(std::size_t size)
{
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> shape(1.0, 500.0);
    std::vector<BetaPosterior> bank(size);
    for (auto& p : bank) p = {shape(rng), shape(rng)};
    return bank;
}

// Arguments: agent count, topology (0 complete, 1 3-regular, 2 cycle).
template <void (*Merge)(const CommMatrix&, std::size_t, std::span<const BetaPosterior>, std::span<BetaPosterior>)>
void BM_Merge(benchmark::State& state)
{
    const auto n = static_cast<std::size_t>(state.range(0));
    const CommMatrix w = build_metropolis(topology_for(static_cast<int>(state.range(1)), n));
    const auto in = random_bank(n * kArms);
    std::vector<BetaPosterior> out(in.size());
    for (auto _ : state) {
        Merge(w, kArms, in, out);
        benchmark::DoNotOptimize(out.data());
        benchmark::ClobberMemory();
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(n * kArms));
}

void merge_serial(const CommMatrix& w, std::size_t k, std::span<const BetaPosterior> in, std::span<BetaPosterior> out)
{
    merge_banks_serial(w, k, in, out);
}
void merge_sparse(const CommMatrix& w, std::size_t k, std::span<const BetaPosterior> in, std::span<BetaPosterior> out)
{
    merge_banks_sparse(w, k, in, out);
}
void merge_parallel(const CommMatrix& w, std::size_t k, std::span<const BetaPosterior> in, std::span<BetaPosterior> out)
{
    merge_banks_parallel(w, k, in, out);
}

void merge_args(benchmark::internal::Benchmark* b)
{
    for (int n : {64, 256})
        for (int topo : {0, 1, 2}) b->Args({n, topo});
}

BENCHMARK(BM_Merge<merge_serial>)->Name("merge/serial")->Apply(merge_args);
BENCHMARK(BM_Merge<merge_sparse>)->Name("merge/sparse")->Apply(merge_args);
BENCHMARK(BM_Merge<merge_parallel>)->Name("merge/parallel")->Apply(merge_args);

Scenario run_scenario_for_bench()
{
    Scenario sc;
    sc.name = "bench";
    std::vector<double> means(kArms, 0.1);
    means[0] = 0.5;
    sc.instance = BanditInstance::bernoulli(means);
    sc.n_agents = 64;
    sc.schedule.topology = Topology::k_regular(64, 3);
    sc.policy = {PolicyKind::dec_thompson, 64.0, 200, 0.0};
    sc.set_horizon(200);
    sc.n_runs = 8;
    sc.master_seed = 3;
    return sc;
}

void BM_RunsSerial(benchmark::State& state)
{
    const Scenario sc = run_scenario_for_bench();
    for (auto _ : state) benchmark::DoNotOptimize(run_scenario_serial(sc));
}

void BM_RunsParallel(benchmark::State& state)
{
    const Scenario sc = run_scenario_for_bench();
    for (auto _ : state) benchmark::DoNotOptimize(run_scenario(sc));
}

BENCHMARK(BM_RunsSerial)->Name("runs/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RunsParallel)->Name("runs/parallel")->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
