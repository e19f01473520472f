#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcnsim/experiment.hpp"
#include "pcnsim/io.hpp"

namespace fs = std::filesystem;
using namespace pcnsim;

namespace {

struct Options {
    std::string config;
    std::string out;
    std::vector<std::uint64_t> seeds;
    bool dry_run = false;
};

void add_common(CLI::App* sub, Options& o) {
    sub->add_option("-c,--config", o.config, "Run configuration (JSON)")->required();
    sub->add_option("-o,--out", o.out, "Output directory (overrides output_dir)");
    sub->add_option("--seeds", o.seeds, "Comma-separated seed list")->delimiter(',');
    sub->add_flag("--dry-run", o.dry_run, "Print the resolved config and a size estimate");
}

RunConfig resolve(const Options& o) {
    auto cfg = load_run_config(o.config);
    if (!o.seeds.empty()) cfg.seeds = o.seeds;
    if (!o.out.empty()) cfg.output_dir = o.out;
    cfg.validate();
    return cfg;
}

void print_dry_run(const RunConfig& cfg, Command cmd) {
    auto e = estimate(cfg, cmd);
    std::cout << to_json(cfg).dump(2) << "\n";
    std::cout << "config_hash " << config_hash(cfg) << "\n"
              << "runs " << e.runs << "\n"
              << "transactions_per_run " << e.transactions << "\n"
              << "shards_per_tx " << format_double(e.shards_per_tx) << "\n"
              << "mean_hops " << format_double(e.mean_hops) << "\n"
              << "estimated_events " << static_cast<std::uint64_t>(e.events) << "\n";
}

void print_rows(const std::vector<ResultRow>& rows) { std::cout << format_results(rows); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Payment channel network simulator"};
    app.require_subcommand(1);
    Options o;
    auto* run = app.add_subcommand("run", "Simulate one protocol per (mean_channel, seed)");
    auto* compare = app.add_subcommand("compare", "Run every protocol on identical workloads");
    auto* sweep = app.add_subcommand("sweep-split", "Fixed DPCN split sizes vs latency and volume");
    auto* gen_topo = app.add_subcommand("gen-topology", "Write the configured topology as JSON");
    auto* gen_work = app.add_subcommand("gen-workload", "Write per-seed workload dumps");
    for (auto* s : {run, compare, sweep, gen_topo, gen_work}) add_common(s, o);

    CLI11_PARSE(app, argc, argv);

    if (!fs::is_regular_file(o.config)) {
        std::cerr << "pcnsim: config file not found: " << o.config << "\n";
        return 2;
    }
    try {
        auto cfg = resolve(o);
        if (run->parsed()) {
            if (o.dry_run) return print_dry_run(cfg, Command::Run), 0;
            print_rows(cmd_run(cfg, cfg.output_dir));
        } else if (compare->parsed()) {
            if (o.dry_run) return print_dry_run(cfg, Command::Compare), 0;
            print_rows(cmd_compare(cfg, cfg.output_dir).rows);
        } else if (sweep->parsed()) {
            if (o.dry_run) return print_dry_run(cfg, Command::SweepSplit), 0;
            std::cout << format_split_rows(cmd_sweep_split(cfg, cfg.output_dir));
        } else if (gen_topo->parsed()) {
            fs::create_directories(cfg.output_dir);
            auto built = build_graph(cfg, cfg.mean_channel.front(), cfg.seeds.front());
            for (const auto& w : built.warnings) std::cerr << "warning: " << w << "\n";
            auto path = cfg.output_dir / (cfg.topology.name() + ".json");
            save_topology(built.graph, path);
            std::cout << path.string() << "\n";
        } else if (gen_work->parsed()) {
            fs::create_directories(cfg.output_dir);
            auto g = build_graph(cfg, cfg.mean_channel.front(), cfg.seeds.front()).graph;
            for (auto seed : cfg.seeds) {
                auto w = build_workload(cfg, g.nodes, seed);
                auto path = cfg.output_dir / ("workload_s" + std::to_string(seed) + ".jsonl");
                write_file_atomic(path, w.dump);
                std::cout << path.string() << " " << w.hash << "\n";
            }
        }
    } catch (const InputError& e) {
        std::cerr << "pcnsim: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "pcnsim: internal error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
