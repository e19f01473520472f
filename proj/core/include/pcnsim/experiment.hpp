#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pcnsim/config.hpp"

namespace pcnsim {

struct BuiltGraph {
    Graph graph;
    std::vector<std::string> warnings;
};

/// Configured topology with capacities drawn for (mean, seed).
BuiltGraph build_graph(const RunConfig& cfg, Amount mean_channel, std::uint64_t seed);

struct BuiltWorkload {
    std::string dump;  // JSON-lines text every protocol replays
    std::string hash;
    std::vector<Transaction> txs;  // parsed back from dump
};

BuiltWorkload build_workload(const RunConfig& cfg, std::size_t nodes, std::uint64_t seed);

MetricsLog run_one(const RunConfig& cfg, Protocol p, Amount mean_channel, std::uint64_t seed,
                   const Graph& g, const BuiltWorkload& w,
                   std::optional<Amount> forced_split = std::nullopt);

/// Runs jobs on up to max_threads workers. Each job must be independent.
void run_parallel(std::vector<std::function<void()>> jobs, unsigned max_threads);
/// PCNSIM_THREADS if set and positive, else the hardware concurrency.
unsigned default_threads();

struct Estimate {
    std::size_t transactions = 0;
    double shards_per_tx = 0;
    double mean_hops = 0;
    double events = 0;  // across every run the command would perform
    std::size_t runs = 0;
};

enum class Command { Run, Compare, SweepSplit };
Estimate estimate(const RunConfig& cfg, Command cmd);

/// results.csv (+ .meta.json); per-tx logs when write_tx_logs is set.
std::vector<ResultRow> cmd_run(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct CompareOutput {
    std::vector<ResultRow> rows;       // filter=all
    std::vector<ResultRow> breakdown;  // per size bucket, deadline, nodeadline
};
/// compare.csv, compare_breakdown.csv, workload dumps and compare.csv.meta.json.
CompareOutput cmd_compare(const RunConfig& cfg, const std::filesystem::path& out_dir);

struct SplitRow {
    Amount split = 0;
    std::string topology;
    Amount mean_channel = 0;
    std::uint64_t seed = 0;
    std::string config_hash;
    double small_mean_latency_s = 0;
    double small_p95_latency_s = 0;
    std::size_t small_n = 0;
    double small_success_volume = 0;
    double success_ratio = 0;
    double success_volume = 0;

    bool operator==(const SplitRow&) const = default;
};

inline constexpr const char* kSplitHeader =
    "split,topology,mean_channel,seed,config_hash,small_mean_latency_s,small_p95_latency_s,"
    "small_n,small_success_volume,success_ratio,success_volume";

std::string format_split_rows(const std::vector<SplitRow>& rows);
std::vector<SplitRow> parse_split_rows(const std::string& csv);

/// sweep_split.csv: one row per split size per seed (per mean_channel).
std::vector<SplitRow> cmd_sweep_split(const RunConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace pcnsim
