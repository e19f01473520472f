#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pcnsim/messages.hpp"

namespace pcnsim {

struct TxRecord {
    std::uint64_t id = 0;
    NodeId sender = 0;
    NodeId receiver = 0;
    Amount size = 0;
    bool has_deadline = false;
    Seconds deadline = 0;
    Seconds created_at = 0;
    TxStatus status = TxStatus::Pending;
    Seconds latency = 0;  // completion - created_at, meaningful when Succeeded
    std::uint32_t n_shards = 0;
    Amount amount_succeeded = 0;
};

struct ShardRecord {
    std::uint64_t parent = 0;
    Amount amount = 0;
    bool success = false;
    std::uint32_t path_index = 0;
    bool marked = false;
};

struct RunMeta {
    std::string protocol;
    std::string topology;
    Amount mean_channel = 0;
    std::uint64_t seed = 0;
    std::string config_hash;
    std::string workload_hash;
    Seconds horizon = 0;
    Seconds window_start = 0;  // measurement window on created_at, [start, end)
    Seconds window_end = 0;
    std::uint64_t events = 0;
    std::uint64_t drops = 0;
    std::uint64_t marks = 0;
};

/// Outcome of one simulation run. Shards of transaction i occupy the
/// contiguous range of `shards` recorded by first_shard[i].
struct MetricsLog {
    RunMeta meta;
    std::vector<TxRecord> txs;
    std::vector<ShardRecord> shards;
    std::vector<std::size_t> first_shard;

    bool in_window(const TxRecord& t) const {
        return t.created_at >= meta.window_start && t.created_at < meta.window_end;
    }
};

/// Selects transactions for an aggregate. Empty optionals match everything.
struct TxFilter {
    std::optional<Amount> size;
    std::optional<Amount> max_size;
    std::optional<bool> has_deadline;
    bool window_only = true;

    bool matches(const TxRecord& t) const;
    std::string label() const;
    /// "all", "size=N", "max_size=N", "small" (size <= 30), "deadline",
    /// "nodeadline"; `+` joins terms, e.g. "size=30+deadline".
    static TxFilter parse(const std::string& s);
    static TxFilter all() { return {}; }
};

double success_ratio(const MetricsLog& log, const TxFilter& f = {});
double success_volume(const MetricsLog& log, const TxFilter& f = {});
std::size_t count_tx(const MetricsLog& log, const TxFilter& f = {});

struct LatencyStats {
    double mean = 0;
    double p50 = 0;
    double p95 = 0;
    std::size_t n = 0;
};

/// Over succeeded transactions only; nearest-rank percentiles.
LatencyStats latency_stats(const MetricsLog& log, const TxFilter& f = {});
LatencyStats latency_stats(std::vector<double> latencies);

// ---- results files ---------------------------------------------------------

struct ResultRow {
    std::string protocol;
    std::string topology;
    Amount mean_channel = 0;
    std::uint64_t seed = 0;
    std::string filter;
    double success_ratio = 0;
    double success_volume = 0;
    double mean_latency_s = 0;
    double p95_latency_s = 0;
    std::size_t n_tx = 0;

    bool operator==(const ResultRow&) const = default;
};

inline constexpr const char* kResultsHeader =
    "protocol,topology,mean_channel,seed,filter,success_ratio,success_volume,mean_latency_s,"
    "p95_latency_s,n_tx";

ResultRow summarize(const MetricsLog& log, const TxFilter& f);
std::string format_results(const std::vector<ResultRow>& rows);
std::vector<ResultRow> parse_results(const std::string& csv);
void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path);

/// Per-transaction CSV over the measurement window:
/// `tx_id,size,deadline,status,latency_s,n_shards`.
std::string format_tx_csv(const MetricsLog& log);
/// Per-shard CSV for the same transactions: `tx_id,amount,success,path,marked`.
std::string format_shard_csv(const MetricsLog& log);

/// Rebuilds a log (window-only transactions) from the two CSVs; aggregates over
/// the result equal the in-memory ones exactly.
MetricsLog parse_tx_logs(const std::string& tx_csv, const std::string& shard_csv);

void write_tx_logs(const MetricsLog& log, const std::filesystem::path& tx_path,
                   const std::filesystem::path& shard_path);

}  // namespace pcnsim
