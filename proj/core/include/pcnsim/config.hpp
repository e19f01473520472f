#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pcnsim/engine.hpp"
#include "pcnsim/topology.hpp"
#include "pcnsim/workload.hpp"

namespace pcnsim {

struct TopologySpec {
    enum class Kind { WattsStrogatz, BarabasiAlbert, ScaleFree, File };
    Kind kind = Kind::WattsStrogatz;
    std::string label;  // name used in result rows; defaults per kind
    std::size_t n = 50;
    std::size_t ring_degree = 8;
    double rewire_prob = 0.1;
    std::size_t attach_m = 8;
    std::size_t edges = 265;
    std::filesystem::path path;
    std::uint64_t seed = 1;
    double delay_ms = 30.0;  // generated topologies

    std::string name() const;
};

/// Everything a run, sweep or comparison needs. Parsed from JSON with every
/// key optional; unknown keys are rejected.
struct RunConfig {
    std::string name = "run";
    TopologySpec topology;
    CapacityDist capacity;
    bool capacity_set = false;
    std::vector<Amount> mean_channel = {4000};
    Protocol protocol = Protocol::Dpcn;
    std::vector<Protocol> protocols = {Protocol::Dpcn, Protocol::Spider, Protocol::Waterfilling};
    DpcnParams dpcn;
    SpiderParams spider;
    WaterfillingParams waterfilling;
    WorkloadConfig workload;
    RouterConfig router;
    Seconds stats_tick = 0.5;
    double warmup_fraction = 0.1;
    AuditLevel audit = AuditLevel::Touched;
    bool trace = false;
    bool write_tx_logs = false;
    std::vector<std::uint64_t> seeds = {1};
    std::vector<Amount> split_sizes = {1, 5, 10, 25, 50};
    Amount small_max_size = 30;
    std::filesystem::path output_dir = "out";

    /// Throws InputError on invalid values.
    void validate() const;
    EngineConfig engine(Protocol p) const;
};

/// `base_dir` resolves a relative topology file path.
RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
RunConfig load_run_config(const std::filesystem::path& path);
nlohmann::json to_json(const RunConfig& cfg);
/// SHA-256 of the canonical resolved config.
std::string config_hash(const RunConfig& cfg);

}  // namespace pcnsim
