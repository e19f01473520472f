#include <benchmark/benchmark.h>

#include "pcnsim/engine.hpp"
#include "pcnsim/workload.hpp"

using namespace pcnsim;

namespace {

Graph sw50(Amount mean) {
    return assign_capacities(generate_watts_strogatz(50, 8, 0.1, 1), mean, CapacityDist{}, 1);
}

void BM_WidestPaths(benchmark::State& state) {
    auto g = sw50(4000);
    NodeId dst = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(k_widest_disjoint_paths(g, 0, dst, 8));
        dst = dst % 49 + 1;
    }
}
BENCHMARK(BM_WidestPaths);

void BM_SplitTransaction(benchmark::State& state) {
    Transaction tx;
    tx.amount = state.range(0);
    for (auto _ : state) benchmark::DoNotOptimize(split_transaction(tx, 20, 0));
    state.SetItemsProcessed(state.iterations() * ((tx.amount + 19) / 20));
}
BENCHMARK(BM_SplitTransaction)->Arg(30)->Arg(1000);

void BM_EventLoop(benchmark::State& state) {
    auto g = sw50(4000);
    WorkloadConfig w;
    w.horizon = 2.0;
    auto txs = generate_workload(w, g.nodes, 1);
    EngineConfig cfg;
    cfg.protocol = static_cast<Protocol>(state.range(0));
    cfg.horizon = w.horizon;
    cfg.audit = AuditLevel::None;
    std::uint64_t events = 0;
    for (auto _ : state) {
        Simulator sim(cfg, g, txs);
        sim.run();
        events += sim.events_processed();
    }
    state.counters["events/s"] = benchmark::Counter(static_cast<double>(events), benchmark::Counter::kIsRate);
}
BENCHMARK(BM_EventLoop)->Arg(0)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
