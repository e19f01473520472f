#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pcnsim/messages.hpp"
#include "pcnsim/topology.hpp"

namespace pcnsim {

enum class DeadlineMode {
    Coin,        // each transaction independently carries a deadline w.p. deadline_fraction
    Stratified,  // exactly floor((1 - fraction) * count) per size bucket are deadline-free
};

struct WorkloadConfig {
    double rate_per_host = 30.0;
    std::size_t receivers_per_host = 10;
    /// Size -> probability. Defaults approximate a highly skewed mix; they are
    /// a modelling choice, recorded with every results file.
    std::vector<std::pair<Amount, double>> size_weights = {
        {5, 0.35}, {15, 0.25}, {30, 0.15}, {80, 0.10}, {150, 0.07}, {400, 0.05}, {1000, 0.03}};
    /// Size -> deadline seconds.
    std::map<Amount, Seconds> deadline_table = {{5, 0.6},   {15, 0.7},  {30, 0.8},  {80, 0.9},
                                                {150, 1.1}, {400, 1.5}, {1000, 2.0}};
    double deadline_fraction = 1.0;
    DeadlineMode deadline_mode = DeadlineMode::Stratified;
    double deadline_scale = 1.0;
    Seconds horizon = 10.0;

    void validate(std::size_t nodes) const;
    /// The table actually applied: deadline_table scaled by deadline_scale.
    std::map<Amount, Seconds> effective_deadlines() const;
};

/// Poisson arrivals per host, time-ordered, ids 0..N-1 in order.
std::vector<Transaction> generate_workload(const WorkloadConfig& cfg, std::size_t nodes,
                                           std::uint64_t seed);

/// Makes exactly floor(no_deadline_share * count) transactions of each size
/// bucket deadline-free; membership is a seeded shuffle.
void stratify_deadlines(std::vector<Transaction>& txs, double no_deadline_share,
                        std::uint64_t seed);

/// JSON-lines `{"t":..,"s":..,"r":..,"amt":..,"ddl":..|null}`.
std::string dump_workload(const std::vector<Transaction>& txs);
std::vector<Transaction> parse_workload(const std::string& text);
std::vector<Transaction> load_workload(const std::filesystem::path& path);

}  // namespace pcnsim
