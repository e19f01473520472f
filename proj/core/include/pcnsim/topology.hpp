#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pcnsim/types.hpp"

namespace pcnsim {

/// Traversal direction over a channel: Forward moves funds u -> v.
enum class Dir : std::uint8_t { Forward = 0, Backward = 1 };

inline constexpr int idx(Dir d) { return static_cast<int>(d); }
inline constexpr Dir flip(Dir d) { return d == Dir::Forward ? Dir::Backward : Dir::Forward; }

/// Bidirectional payment channel. Endpoints are stored with u < v.
///
/// balance[0] is u's spendable side, balance[1] is v's. locked[d] holds funds
/// escrowed by in-flight sub-transactions travelling in direction d.
/// balance[0] + balance[1] + locked[0] + locked[1] == capacity always.
struct Channel {
    NodeId u = 0;
    NodeId v = 0;
    Amount capacity = 0;
    Amount balance[2] = {0, 0};
    Amount locked[2] = {0, 0};
    double delay_ms = 30.0;

    Seconds delay() const { return delay_ms / 1000.0; }
    NodeId source(Dir d) const { return d == Dir::Forward ? u : v; }
    NodeId target(Dir d) const { return d == Dir::Forward ? v : u; }
    bool conserved() const {
        return balance[0] >= 0 && balance[1] >= 0 && locked[0] >= 0 && locked[1] >= 0 &&
               balance[0] + balance[1] + locked[0] + locked[1] == capacity;
    }

    bool operator==(const Channel&) const = default;
};

struct Graph {
    std::size_t nodes = 0;
    std::vector<Channel> channels;
    std::vector<std::vector<std::uint32_t>> adjacency;  // node -> incident channel indices

    /// Rebuilds adjacency from channels; throws on self loops or parallel channels.
    void rebuild_adjacency();
    bool connected() const;
    std::size_t degree(NodeId n) const { return adjacency[n].size(); }
    /// Index of the channel joining a and b, or -1.
    std::int64_t find_channel(NodeId a, NodeId b) const;

    bool operator==(const Graph&) const = default;
};

struct PathHop {
    std::uint32_t channel = 0;
    Dir dir = Dir::Forward;

    bool operator==(const PathHop&) const = default;
};

/// A simple sender -> receiver path. nodes.size() == hops.size() + 1.
struct Path {
    std::vector<PathHop> hops;
    std::vector<NodeId> nodes;
    Amount bottleneck_capacity = 0;

    Seconds total_delay(const Graph& g) const;
    bool operator==(const Path&) const = default;
};

// ---- generators -----------------------------------------------------------

/// Ring lattice rewired with probability rewire_prob. Retries (with derived
/// seeds) until connected; throws InputError after a bounded number of tries.
Graph generate_watts_strogatz(std::size_t n, std::size_t ring_degree, double rewire_prob,
                              std::uint64_t seed);

/// Preferential attachment starting from a star on attach_m + 1 nodes; every
/// later node attaches attach_m edges, so the channel count is m * (n - m).
Graph generate_barabasi_albert(std::size_t n, std::size_t attach_m, std::uint64_t seed);

/// Preferential attachment with a per-node attach schedule chosen so the graph
/// has exactly `edges` channels. Used for LN-like synthetic subnetworks.
Graph generate_scale_free_with_edges(std::size_t n, std::size_t edges, std::uint64_t seed);

/// Draws per-channel delays log-uniformly in [lo_ms, hi_ms].
void assign_delays_log_uniform(Graph& g, double lo_ms, double hi_ms, std::uint64_t seed);

// ---- capacities -------------------------------------------------------------

struct CapacityDist {
    enum class Kind { LogNormal, Constant, Uniform, Scale };
    Kind kind = Kind::LogNormal;
    double sigma = 1.0;        // LogNormal shape
    double uniform_lo = 0.5;   // Uniform bounds, as fractions of the mean
    double uniform_hi = 1.5;

    static CapacityDist parse(const std::string& name);
};

/// Draws capacities (or, for Kind::Scale, keeps existing relative sizes) and
/// rescales so the empirical mean matches mean_capacity. Balances are reset to
/// an even split, odd remainder to u; locks are cleared.
Graph assign_capacities(Graph g, Amount mean_capacity, const CapacityDist& dist,
                        std::uint64_t seed);

// ---- files --------------------------------------------------------------------

struct LoadedTopology {
    Graph graph;
    std::vector<std::string> warnings;
};

inline constexpr double kMinFileDelayMs = 0.29;
inline constexpr double kMaxFileDelayMs = 130.0;

/// Reads the JSON topology format. Balances are initialised to an even split.
LoadedTopology load_topology(const std::filesystem::path& path);
LoadedTopology parse_topology(const std::string& text);
std::string serialize_topology(const Graph& g);
void save_topology(const Graph& g, const std::filesystem::path& path);

// ---- routing --------------------------------------------------------------------

/// Greedy edge-disjoint widest paths by capacity: find the max-bottleneck
/// path, remove its channels, repeat. Ties between equal bottlenecks prefer
/// fewer hops, then the smaller predecessor id. Returned in discovery order.
std::vector<Path> k_widest_disjoint_paths(const Graph& g, NodeId src, NodeId dst, std::size_t k);

}  // namespace pcnsim
