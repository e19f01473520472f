#include <doctest.h>

#include <filesystem>

#include "pcnsim/config.hpp"
#include "pcnsim/experiment.hpp"
#include "pcnsim/io.hpp"

using namespace pcnsim;
using nlohmann::json;

namespace {

const std::filesystem::path kConfigs = PCNSIM_SOURCE_DIR "/configs";

}  // namespace

TEST_CASE("defaults") {
    auto c = parse_run_config(json::object());
    CHECK(c.dpcn.c == 8);
    CHECK(c.dpcn.b == 0.8);
    CHECK(c.dpcn.g == 8);
    CHECK(c.dpcn.beta == 1.3);
    CHECK(c.dpcn.delta == 0.2);
    CHECK(c.dpcn.k_paths == 8);
    CHECK(c.dpcn.fixed_split_nodl == 20);
    CHECK(c.workload.rate_per_host == 30);
    CHECK(c.workload.receivers_per_host == 10);
    CHECK(c.engine(Protocol::Dpcn).router.mark_threshold == 0.2);
    CHECK(c.split_sizes == std::vector<Amount>{1, 5, 10, 25, 50});
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_run_config(json{{"bogus", 1}}), InputError);
    CHECK_THROWS_AS(parse_run_config(json{{"dpcn", {{"gama", 1}}}}), InputError);
    CHECK_THROWS_AS(parse_run_config(json{{"topology", {{"kind", "hypercube"}}}}), InputError);
    CHECK_THROWS_AS(parse_run_config(json{{"protocol", "lightning"}}), InputError);
    CHECK_THROWS_AS(parse_run_config(json{{"dpcn", {{"c", "eight"}}}}), InputError);
    CHECK_THROWS_AS(parse_run_config(json{{"dpcn", {{"c", 0.5}}}}), InputError);
    CHECK_THROWS_AS(parse_run_config(json{{"seeds", json::array()}}), InputError);
}

TEST_CASE("file topologies use their own window constants") {
    auto c = load_run_config(kConfigs / "ln4000.json");
    CHECK(c.topology.kind == TopologySpec::Kind::File);
    CHECK(c.dpcn.g == 7.0);
    CHECK(c.dpcn.beta == 0.8);
    CHECK(c.engine(Protocol::Spider).spider.g == 7.0);
    CHECK(std::filesystem::exists(c.topology.path));
    CHECK(c.topology.name() == "ln106");

    auto sw = load_run_config(kConfigs / "sw4000.json");
    CHECK(sw.dpcn.g == 8.0);
    CHECK(sw.topology.name() == "sw50");
}

TEST_CASE("config hash") {
    auto a = load_run_config(kConfigs / "sw4000.json");
    auto b = load_run_config(kConfigs / "sw4000.json");
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 64);
    b.seeds = {9};
    b.output_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.dpcn.beta = 1.0;
    CHECK(config_hash(a) != config_hash(b));
    // The canonical form parses back to the same hash.
    CHECK(config_hash(parse_run_config(to_json(a))) == config_hash(a));
}

TEST_CASE("config files report the failing line") {
    const auto dir = std::filesystem::temp_directory_path() / "pcnsim_config_test";
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "bad.json", "{\n  \"name\": \"x\",\n  \"seeds\": [1,,2]\n}\n");
    try {
        load_run_config(dir / "bad.json");
        FAIL("expected an error");
    } catch (const InputError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("bad.json") != std::string::npos);
        CHECK(msg.find("line 3") != std::string::npos);
    }
    std::filesystem::remove_all(dir);
}

TEST_CASE("shipped configs all load") {
    for (const auto& entry : std::filesystem::directory_iterator(kConfigs)) {
        if (entry.path().extension() != ".json") continue;
        CAPTURE(entry.path().string());
        CHECK_NOTHROW(load_run_config(entry.path()));
    }
}

TEST_CASE("one workload per seed shared by every protocol") {
    auto c = parse_run_config(json{{"topology", {{"kind", "watts_strogatz"}, {"n", 12}, {"ring_degree", 4}}},
                                   {"workload", {{"horizon_s", 1.0}, {"receivers_per_host", 3}}}});
    auto g = build_graph(c, 500, 1);
    auto w1 = build_workload(c, g.graph.nodes, 1);
    auto w2 = build_workload(c, g.graph.nodes, 1);
    CHECK(w1.hash == w2.hash);
    CHECK(w1.hash == sha256_hex(w1.dump));
    CHECK(build_workload(c, g.graph.nodes, 2).hash != w1.hash);
    // Structure is fixed; capacities change with the seed.
    auto g2 = build_graph(c, 500, 2);
    CHECK(g.graph.channels.size() == g2.graph.channels.size());
    for (std::size_t i = 0; i < g.graph.channels.size(); ++i) {
        CHECK(g.graph.channels[i].u == g2.graph.channels[i].u);
        CHECK(g.graph.channels[i].v == g2.graph.channels[i].v);
    }
}
