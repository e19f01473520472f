#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <set>

#include "../common/graphs.hpp"
#include "pcnsim/io.hpp"
#include "pcnsim/topology.hpp"

using namespace pcnsim;
using pcnsim::testing::all_simple_paths;
using pcnsim::testing::make_graph;

namespace {

std::size_t max_degree(const Graph& g) {
    std::size_t m = 0;
    for (NodeId n = 0; n < g.nodes; ++n) m = std::max(m, g.degree(n));
    return m;
}

bool disjoint(const std::vector<Path>& paths) {
    std::set<std::uint32_t> used;
    for (const auto& p : paths)
        for (const auto& h : p.hops)
            if (!used.insert(h.channel).second) return false;
    return true;
}

bool is_simple_path(const Graph& g, const Path& p, NodeId src, NodeId dst) {
    if (p.nodes.size() != p.hops.size() + 1 || p.nodes.front() != src || p.nodes.back() != dst)
        return false;
    std::set<NodeId> seen(p.nodes.begin(), p.nodes.end());
    if (seen.size() != p.nodes.size()) return false;
    Amount bn = std::numeric_limits<Amount>::max();
    for (std::size_t i = 0; i < p.hops.size(); ++i) {
        const auto& ch = g.channels[p.hops[i].channel];
        if (ch.source(p.hops[i].dir) != p.nodes[i] || ch.target(p.hops[i].dir) != p.nodes[i + 1])
            return false;
        bn = std::min(bn, ch.capacity);
    }
    return bn == p.bottleneck_capacity;
}

}  // namespace

TEST_CASE("watts-strogatz sizes and determinism") {
    auto g = generate_watts_strogatz(50, 8, 0.1, 3);
    CHECK(g.nodes == 50);
    CHECK(g.channels.size() == 200);
    CHECK(g.connected());
    CHECK(g == generate_watts_strogatz(50, 8, 0.1, 3));
    CHECK(generate_watts_strogatz(10, 4, 0.2, 9) == generate_watts_strogatz(10, 4, 0.2, 9));
}

TEST_CASE("watts-strogatz without rewiring is the ring lattice") {
    auto g = generate_watts_strogatz(12, 4, 0.0, 1);
    REQUIRE(g.channels.size() == 24);
    for (NodeId n = 0; n < 12; ++n) {
        CHECK(g.degree(n) == 4);
        CHECK(g.find_channel(n, (n + 1) % 12) >= 0);
        CHECK(g.find_channel(n, (n + 2) % 12) >= 0);
    }
}

TEST_CASE("watts-strogatz rejects bad parameters") {
    CHECK_THROWS_AS(generate_watts_strogatz(2, 2, 0.1, 1), InputError);
    CHECK_THROWS_AS(generate_watts_strogatz(10, 10, 0.1, 1), InputError);
    CHECK_THROWS_AS(generate_watts_strogatz(10, 3, 0.1, 1), InputError);
    CHECK_THROWS_AS(generate_watts_strogatz(10, 4, 1.5, 1), InputError);
}

TEST_CASE("barabasi-albert edge counts") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto g = generate_barabasi_albert(50, 8, seed);
        CHECK(g.channels.size() == 336);
        CHECK(g.connected());
    }
    auto tree = generate_barabasi_albert(5, 1, 4);
    CHECK(tree.channels.size() == 4);
    CHECK(tree.connected());
    CHECK_THROWS_AS(generate_barabasi_albert(5, 5, 1), InputError);
    CHECK_THROWS_AS(generate_barabasi_albert(5, 0, 1), InputError);
}

TEST_CASE("barabasi-albert degree distribution is heavy-tailed") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        auto g = generate_barabasi_albert(50, 8, seed);
        const double mean = 2.0 * g.channels.size() / g.nodes;
        CHECK(static_cast<double>(max_degree(g)) > 2 * mean);
    }
}

TEST_CASE("scale-free generator hits the requested edge count") {
    auto g = generate_scale_free_with_edges(106, 265, 11);
    CHECK(g.nodes == 106);
    CHECK(g.channels.size() == 265);
    CHECK(g.connected());
    assign_delays_log_uniform(g, 0.29, 130.0, 5);
    for (const auto& ch : g.channels) {
        CHECK(ch.delay_ms >= 0.29);
        CHECK(ch.delay_ms <= 130.0);
    }
}

TEST_CASE("capacities hit the target mean and split evenly") {
    auto g = generate_watts_strogatz(50, 8, 0.1, 1);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        auto c = assign_capacities(g, 4000, CapacityDist{}, seed);
        double sum = 0;
        for (const auto& ch : c.channels) {
            sum += static_cast<double>(ch.capacity);
            CHECK(ch.conserved());
            CHECK(ch.balance[0] - ch.balance[1] == ch.capacity % 2);
        }
        const double mean = sum / c.channels.size();
        CHECK(mean >= 3960);
        CHECK(mean <= 4040);
    }
    CapacityDist constant;
    constant.kind = CapacityDist::Kind::Constant;
    auto c = assign_capacities(g, 900, constant, 1);
    for (const auto& ch : c.channels) {
        CHECK(ch.capacity == 900);
        CHECK(ch.balance[0] == 450);
        CHECK(ch.balance[1] == 450);
    }
    for (Amount mean : {900, 1350, 2750, 4000, 8750}) {
        auto s = assign_capacities(g, mean, CapacityDist{}, 2);
        double sum = 0;
        for (const auto& ch : s.channels) sum += static_cast<double>(ch.capacity);
        CHECK(std::abs(sum / s.channels.size() - mean) <= 0.01 * mean);
    }
    CHECK_THROWS_AS(assign_capacities(g, 0, CapacityDist{}, 1), InputError);
    CHECK_THROWS_AS(CapacityDist::parse("pareto"), InputError);
}

TEST_CASE("odd capacity remainder goes to the smaller endpoint") {
    auto g = make_graph(2, {{1, 0, 7}});
    CapacityDist constant;
    constant.kind = CapacityDist::Kind::Constant;
    auto c = assign_capacities(g, 7, constant, 1);
    CHECK(c.channels[0].u == 0);
    CHECK(c.channels[0].balance[0] == 4);
    CHECK(c.channels[0].balance[1] == 3);
}

TEST_CASE("topology files") {
    SUBCASE("round trip") {
        auto g = generate_scale_free_with_edges(106, 265, 2);
        assign_delays_log_uniform(g, 0.29, 130.0, 2);
        g = assign_capacities(std::move(g), 4000, CapacityDist{}, 2);
        auto back = parse_topology(serialize_topology(g));
        CHECK(back.warnings.empty());
        CHECK(back.graph == g);
        CHECK(back.graph.nodes == 106);
        CHECK(back.graph.channels.size() == 265);
    }
    SUBCASE("empty channel list") {
        CHECK_THROWS_AS(parse_topology(R"({"nodes": 3, "channels": []})"), InputError);
    }
    SUBCASE("duplicate edge") {
        CHECK_THROWS_AS(parse_topology(R"({"nodes": 3, "channels": [
            {"u": 0, "v": 1, "capacity": 5}, {"u": 1, "v": 0, "capacity": 6}]})"),
                        InputError);
    }
    SUBCASE("parse error names the line") {
        try {
            parse_topology("{\"nodes\": 3,\n\"channels\": [\n{\"u\": 0 \"v\": 1}]}");
            FAIL("expected an error");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
    }
    SUBCASE("disconnected graph warns") {
        auto t = parse_topology(R"({"nodes": 4, "channels": [
            {"u": 0, "v": 1, "capacity": 5}, {"u": 2, "v": 3, "capacity": 5}]})");
        REQUIRE(t.warnings.size() == 1);
        CHECK(t.warnings[0].find("not connected") != std::string::npos);
    }
    SUBCASE("delays are clamped to the sampled range") {
        auto t = parse_topology(R"({"nodes": 3, "channels": [
            {"u": 0, "v": 1, "capacity": 5, "delay_ms": 0.01},
            {"u": 1, "v": 2, "capacity": 5, "delay_ms": 500}]})");
        CHECK(t.graph.channels[0].delay_ms == doctest::Approx(0.29));
        CHECK(t.graph.channels[1].delay_ms == doctest::Approx(130.0));
        CHECK(t.warnings.size() == 2);
    }
    SUBCASE("bad records") {
        CHECK_THROWS_AS(parse_topology(R"({"nodes": 2, "channels": [{"u": 0, "v": 2, "capacity": 5}]})"),
                        InputError);
        CHECK_THROWS_AS(parse_topology(R"({"nodes": 2, "channels": [{"u": 0, "v": 0, "capacity": 5}]})"),
                        InputError);
        CHECK_THROWS_AS(parse_topology(R"({"nodes": 2, "channels": [{"u": 0, "v": 1, "capacity": 0}]})"),
                        InputError);
        CHECK_THROWS_AS(parse_topology(R"({"nodes": 2, "channels": [{"u": 0, "v": 1, "cap": 3}]})"),
                        InputError);
    }
    SUBCASE("missing file names the path") {
        try {
            load_topology("/nonexistent/topo.json");
            FAIL("expected an error");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("/nonexistent/topo.json") != std::string::npos);
        }
    }
    SUBCASE("checked-in LN-like sample") {
        const std::filesystem::path file = PCNSIM_SOURCE_DIR "/configs/topologies/ln106.json";
        auto t = load_topology(file);
        CHECK(t.graph.nodes == 106);
        CHECK(t.graph.channels.size() == 265);
        CHECK(t.graph.connected());
    }
}

TEST_CASE("widest paths on a diamond match exhaustive enumeration") {
    // 0-1-3 has bottleneck 10, 0-2-3 has bottleneck 5.
    auto g = make_graph(4, {{0, 1, 10}, {1, 3, 12}, {0, 2, 5}, {2, 3, 9}});
    auto paths = k_widest_disjoint_paths(g, 0, 3, 2);
    REQUIRE(paths.size() == 2);

    std::vector<bool> banned(g.channels.size(), false);
    for (const auto& p : paths) {
        auto all = all_simple_paths(g, 0, 3, banned);
        REQUIRE(!all.empty());
        Amount best = 0;
        for (const auto& sp : all) best = std::max(best, sp.bottleneck);
        CHECK(p.bottleneck_capacity == best);
        for (const auto& h : p.hops) banned[h.channel] = true;
    }
    CHECK(paths[0].bottleneck_capacity == 10);
    CHECK(paths[1].bottleneck_capacity == 5);
    CHECK(paths[0].nodes == std::vector<NodeId>{0, 1, 3});
    CHECK(paths[1].nodes == std::vector<NodeId>{0, 2, 3});
}

TEST_CASE("widest path edge cases") {
    auto chain = make_graph(4, {{0, 1, 3}, {1, 2, 4}, {2, 3, 5}});
    auto one = k_widest_disjoint_paths(chain, 0, 3, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].hops.size() == 3);
    CHECK(one[0].bottleneck_capacity == 3);

    auto pair = make_graph(2, {{0, 1, 8}});
    CHECK(k_widest_disjoint_paths(pair, 0, 1, 8).size() == 1);
    CHECK(k_widest_disjoint_paths(pair, 1, 0, 8)[0].hops[0].dir == Dir::Backward);

    auto split = make_graph(4, {{0, 1, 3}, {2, 3, 4}});
    CHECK(k_widest_disjoint_paths(split, 0, 3, 2).empty());
    CHECK_THROWS_AS(k_widest_disjoint_paths(pair, 0, 0, 1), InputError);
    CHECK_THROWS_AS(k_widest_disjoint_paths(pair, 0, 1, 0), InputError);
}

TEST_CASE("equal bottlenecks prefer fewer hops") {
    auto g = make_graph(4, {{0, 1, 10}, {1, 2, 10}, {2, 3, 10}, {0, 3, 10}});
    auto paths = k_widest_disjoint_paths(g, 0, 3, 2);
    REQUIRE(paths.size() == 2);
    CHECK(paths[0].hops.size() == 1);
    CHECK(paths[1].hops.size() == 3);
}

TEST_CASE("widest-path properties on random graphs") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 40; ++trial) {
        auto g = generate_watts_strogatz(12, 4, 0.3, 100 + trial);
        g = assign_capacities(std::move(g), 100, CapacityDist{}, 200 + trial);
        std::uniform_int_distribution<NodeId> pick(0, 11);
        NodeId s = pick(rng), d = pick(rng);
        if (s == d) d = (d + 1) % 12;
        auto paths = k_widest_disjoint_paths(g, s, d, 8);
        REQUIRE(!paths.empty());
        CHECK(disjoint(paths));
        for (const auto& p : paths) {
            CHECK(is_simple_path(g, p, s, d));
            CHECK(p.bottleneck_capacity <= paths[0].bottleneck_capacity);
        }
        std::vector<bool> none(g.channels.size(), false);
        Amount best = 0;
        for (const auto& sp : all_simple_paths(g, s, d, none)) best = std::max(best, sp.bottleneck);
        CHECK(paths[0].bottleneck_capacity == best);
        CHECK(paths == k_widest_disjoint_paths(g, s, d, 8));
    }
}
