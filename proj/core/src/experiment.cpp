#include "pcnsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "pcnsim/io.hpp"

namespace pcnsim {

using nlohmann::json;

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(salt), static_cast<std::uint32_t>(salt >> 32)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

double mean_shards(const WorkloadConfig& w, Amount split) {
    double total = 0, mass = 0;
    for (const auto& [s, p] : w.size_weights) {
        total += p * std::ceil(static_cast<double>(s) / static_cast<double>(split));
        mass += p;
    }
    return mass > 0 ? total / mass : 0.0;
}

double mean_route_hops(const Graph& g, std::size_t k) {
    // Spread a bounded sample of ordered pairs over the node range.
    const std::size_t n = g.nodes, want = std::min<std::size_t>(200, n * (n - 1));
    double sum = 0;
    std::size_t paths = 0;
    for (std::size_t i = 0; i < want; ++i) {
        const auto pair = i * (n * (n - 1)) / want;
        const auto src = static_cast<NodeId>(pair / (n - 1));
        auto dst = static_cast<NodeId>(pair % (n - 1));
        if (dst >= src) ++dst;
        for (const auto& p : k_widest_disjoint_paths(g, src, dst, k)) {
            sum += static_cast<double>(p.hops.size());
            ++paths;
        }
    }
    return paths ? sum / static_cast<double>(paths) : 0.0;
}

json run_entry(const MetricsLog& log) {
    return {{"protocol", log.meta.protocol},
            {"topology", log.meta.topology},
            {"mean_channel", log.meta.mean_channel},
            {"seed", log.meta.seed},
            {"workload_hash", log.meta.workload_hash},
            {"events", log.meta.events},
            {"drops", log.meta.drops},
            {"marks", log.meta.marks}};
}

void write_meta(const RunConfig& cfg, const std::vector<MetricsLog>& logs,
                const std::vector<std::string>& warnings, const std::filesystem::path& path) {
    json runs = json::array();
    for (const auto& l : logs) runs.push_back(run_entry(l));
    json meta = {{"config_hash", config_hash(cfg)},
                 {"config", to_json(cfg)},
                 {"runs", runs},
                 {"warnings", warnings}};
    write_file_atomic(path, meta.dump(2) + "\n");
}

std::string tx_log_stem(const MetricsLog& log) {
    return log.meta.protocol + "_" + std::to_string(log.meta.mean_channel) + "_s" +
           std::to_string(log.meta.seed);
}

}  // namespace

BuiltGraph build_graph(const RunConfig& cfg, Amount mean_channel, std::uint64_t seed) {
    const auto& t = cfg.topology;
    BuiltGraph out;
    switch (t.kind) {
    case TopologySpec::Kind::WattsStrogatz:
        out.graph = generate_watts_strogatz(t.n, t.ring_degree, t.rewire_prob, t.seed);
        for (auto& ch : out.graph.channels) ch.delay_ms = t.delay_ms;
        break;
    case TopologySpec::Kind::BarabasiAlbert:
        out.graph = generate_barabasi_albert(t.n, t.attach_m, t.seed);
        for (auto& ch : out.graph.channels) ch.delay_ms = t.delay_ms;
        break;
    case TopologySpec::Kind::ScaleFree:
        out.graph = generate_scale_free_with_edges(t.n, t.edges, t.seed);
        assign_delays_log_uniform(out.graph, 0.29, 130.0, mix_seed(t.seed, 0xde1a));
        break;
    case TopologySpec::Kind::File: {
        auto loaded = load_topology(t.path);
        out.graph = std::move(loaded.graph);
        out.warnings = std::move(loaded.warnings);
        break;
    }
    }
    out.graph = assign_capacities(std::move(out.graph), mean_channel, cfg.capacity,
                                  mix_seed(seed, static_cast<std::uint64_t>(mean_channel)));
    return out;
}

BuiltWorkload build_workload(const RunConfig& cfg, std::size_t nodes, std::uint64_t seed) {
    cfg.workload.validate(nodes);
    BuiltWorkload w;
    w.dump = dump_workload(generate_workload(cfg.workload, nodes, seed));
    w.hash = sha256_hex(w.dump);
    w.txs = parse_workload(w.dump);
    return w;
}

MetricsLog run_one(const RunConfig& cfg, Protocol p, Amount mean_channel, std::uint64_t seed,
                   const Graph& g, const BuiltWorkload& w, std::optional<Amount> forced_split) {
    auto ec = cfg.engine(p);
    ec.forced_split = forced_split;
    auto log = run_simulation(ec, g, w.txs);
    log.meta.topology = cfg.topology.name();
    log.meta.mean_channel = mean_channel;
    log.meta.seed = seed;
    log.meta.config_hash = config_hash(cfg);
    log.meta.workload_hash = w.hash;
    return log;
}

unsigned default_threads() {
    if (const char* env = std::getenv("PCNSIM_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void run_parallel(std::vector<std::function<void()>> jobs, unsigned max_threads) {
    const unsigned n = std::max(1u, std::min<unsigned>(max_threads, static_cast<unsigned>(jobs.size())));
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        for (;;) {
            auto i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            try {
                jobs[i]();
            } catch (...) {
                std::lock_guard lock(error_mu);
                if (!error) error = std::current_exception();
                next = jobs.size();
            }
        }
    };
    if (n == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (error) std::rethrow_exception(error);
}

Estimate estimate(const RunConfig& cfg, Command cmd) {
    Estimate e;
    auto g = build_graph(cfg, cfg.mean_channel.front(), cfg.seeds.front()).graph;
    e.transactions = static_cast<std::size_t>(cfg.workload.rate_per_host *
                                              static_cast<double>(g.nodes) * cfg.workload.horizon);
    e.mean_hops = mean_route_hops(g, cfg.dpcn.k_paths);
    auto shards = [&](Protocol p) {
        switch (p) {
        case Protocol::Dpcn: {
            const double f = cfg.workload.deadline_fraction;
            return f + (1 - f) * mean_shards(cfg.workload, cfg.dpcn.fixed_split_nodl);
        }
        case Protocol::Spider: return mean_shards(cfg.workload, cfg.spider.mtu);
        case Protocol::Waterfilling: return mean_shards(cfg.workload, cfg.waterfilling.mtu);
        }
        return 1.0;
    };
    const double per_shard = 2.0 * e.mean_hops + 2.0;
    const double points = static_cast<double>(cfg.mean_channel.size() * cfg.seeds.size());
    double shards_total = 0;
    std::size_t variants = 0;
    switch (cmd) {
    case Command::Run:
        shards_total = shards(cfg.protocol);
        variants = 1;
        break;
    case Command::Compare:
        for (auto p : cfg.protocols) shards_total += shards(p);
        variants = cfg.protocols.size();
        break;
    case Command::SweepSplit:
        for (auto s : cfg.split_sizes) shards_total += mean_shards(cfg.workload, s);
        variants = cfg.split_sizes.size();
        break;
    }
    e.runs = variants * static_cast<std::size_t>(points);
    e.shards_per_tx = shards_total / static_cast<double>(variants);
    e.events = points * static_cast<double>(e.transactions) * (shards_total * per_shard + 2.0);
    return e;
}

std::vector<ResultRow> cmd_run(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto n_points = cfg.mean_channel.size() * cfg.seeds.size();
    std::vector<MetricsLog> logs(n_points);
    std::vector<std::vector<std::string>> warnings(n_points);
    std::vector<std::function<void()>> jobs;
    for (std::size_t mi = 0; mi < cfg.mean_channel.size(); ++mi)
        for (std::size_t si = 0; si < cfg.seeds.size(); ++si)
            jobs.push_back([&, mi, si] {
                const auto mean = cfg.mean_channel[mi];
                const auto seed = cfg.seeds[si];
                auto g = build_graph(cfg, mean, seed);
                auto w = build_workload(cfg, g.graph.nodes, seed);
                auto idx = mi * cfg.seeds.size() + si;
                logs[idx] = run_one(cfg, cfg.protocol, mean, seed, g.graph, w);
                warnings[idx] = std::move(g.warnings);
            });
    run_parallel(std::move(jobs), default_threads());

    std::vector<ResultRow> rows;
    std::vector<std::string> all_warnings;
    for (std::size_t i = 0; i < logs.size(); ++i) {
        rows.push_back(summarize(logs[i], TxFilter::all()));
        for (auto& w : warnings[i])
            if (std::find(all_warnings.begin(), all_warnings.end(), w) == all_warnings.end())
                all_warnings.push_back(w);
        if (cfg.write_tx_logs)
            write_tx_logs(logs[i], out_dir / ("tx_" + tx_log_stem(logs[i]) + ".csv"),
                          out_dir / ("shards_" + tx_log_stem(logs[i]) + ".csv"));
    }
    write_results(rows, out_dir / "results.csv");
    write_meta(cfg, logs, all_warnings, out_dir / "results.csv.meta.json");
    return rows;
}

CompareOutput cmd_compare(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto np = cfg.protocols.size();
    const auto n_points = cfg.mean_channel.size() * cfg.seeds.size();
    std::vector<BuiltGraph> graphs(n_points);
    std::vector<BuiltWorkload> loads(n_points);
    std::vector<std::function<void()>> prep;
    for (std::size_t mi = 0; mi < cfg.mean_channel.size(); ++mi)
        for (std::size_t si = 0; si < cfg.seeds.size(); ++si)
            prep.push_back([&, mi, si] {
                auto idx = mi * cfg.seeds.size() + si;
                graphs[idx] = build_graph(cfg, cfg.mean_channel[mi], cfg.seeds[si]);
                loads[idx] = build_workload(cfg, graphs[idx].graph.nodes, cfg.seeds[si]);
            });
    run_parallel(std::move(prep), default_threads());
    for (std::size_t si = 0; si < cfg.seeds.size(); ++si)
        write_file_atomic(out_dir / ("workload_s" + std::to_string(cfg.seeds[si]) + ".jsonl"),
                          loads[si].dump);

    std::vector<MetricsLog> logs(n_points * np);
    std::vector<std::function<void()>> jobs;
    for (std::size_t pt = 0; pt < n_points; ++pt)
        for (std::size_t pi = 0; pi < np; ++pi)
            jobs.push_back([&, pt, pi] {
                const auto mean = cfg.mean_channel[pt / cfg.seeds.size()];
                const auto seed = cfg.seeds[pt % cfg.seeds.size()];
                logs[pt * np + pi] =
                    run_one(cfg, cfg.protocols[pi], mean, seed, graphs[pt].graph, loads[pt]);
            });
    run_parallel(std::move(jobs), default_threads());

    std::vector<TxFilter> breakdown;
    for (const auto& [size, _] : cfg.workload.size_weights) {
        TxFilter f;
        f.size = size;
        breakdown.push_back(f);
    }
    TxFilter with_deadline, without_deadline;
    with_deadline.has_deadline = true;
    without_deadline.has_deadline = false;
    breakdown.push_back(with_deadline);
    breakdown.push_back(without_deadline);

    CompareOutput out;
    for (const auto& log : logs) {
        out.rows.push_back(summarize(log, TxFilter::all()));
        for (const auto& f : breakdown) out.breakdown.push_back(summarize(log, f));
        if (cfg.write_tx_logs)
            write_tx_logs(log, out_dir / ("tx_" + tx_log_stem(log) + ".csv"),
                          out_dir / ("shards_" + tx_log_stem(log) + ".csv"));
    }
    std::vector<std::string> warnings = graphs.empty() ? std::vector<std::string>{}
                                                       : graphs.front().warnings;
    write_results(out.rows, out_dir / "compare.csv");
    write_results(out.breakdown, out_dir / "compare_breakdown.csv");
    write_meta(cfg, logs, warnings, out_dir / "compare.csv.meta.json");
    return out;
}

std::string format_split_rows(const std::vector<SplitRow>& rows) {
    std::string out = std::string(kSplitHeader) + "\n";
    for (const auto& r : rows)
        out += std::to_string(r.split) + "," + r.topology + "," + std::to_string(r.mean_channel) +
               "," + std::to_string(r.seed) + "," + r.config_hash + "," +
               format_double(r.small_mean_latency_s) + "," + format_double(r.small_p95_latency_s) +
               "," + std::to_string(r.small_n) + "," + format_double(r.small_success_volume) + "," +
               format_double(r.success_ratio) + "," + format_double(r.success_volume) + "\n";
    return out;
}

std::vector<SplitRow> parse_split_rows(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line) || line != kSplitHeader)
        throw InputError("split sweep CSV header mismatch");
    std::vector<SplitRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 11) throw InputError("split sweep CSV row '" + line + "'");
        SplitRow r;
        try {
            r.split = std::stoll(f[0]);
            r.topology = f[1];
            r.mean_channel = std::stoll(f[2]);
            r.seed = std::stoull(f[3]);
            r.config_hash = f[4];
            r.small_mean_latency_s = std::stod(f[5]);
            r.small_p95_latency_s = std::stod(f[6]);
            r.small_n = std::stoull(f[7]);
            r.small_success_volume = std::stod(f[8]);
            r.success_ratio = std::stod(f[9]);
            r.success_volume = std::stod(f[10]);
        } catch (const std::exception&) {
            throw InputError("split sweep CSV row '" + line + "'");
        }
        rows.push_back(r);
    }
    return rows;
}

std::vector<SplitRow> cmd_sweep_split(const RunConfig& cfg, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    const auto ns = cfg.split_sizes.size();
    const auto n_points = cfg.mean_channel.size() * cfg.seeds.size();
    std::vector<BuiltGraph> graphs(n_points);
    std::vector<BuiltWorkload> loads(n_points);
    std::vector<std::function<void()>> prep;
    for (std::size_t pt = 0; pt < n_points; ++pt)
        prep.push_back([&, pt] {
            const auto seed = cfg.seeds[pt % cfg.seeds.size()];
            graphs[pt] = build_graph(cfg, cfg.mean_channel[pt / cfg.seeds.size()], seed);
            loads[pt] = build_workload(cfg, graphs[pt].graph.nodes, seed);
        });
    run_parallel(std::move(prep), default_threads());

    std::vector<MetricsLog> logs(n_points * ns);
    std::vector<std::function<void()>> jobs;
    for (std::size_t pt = 0; pt < n_points; ++pt)
        for (std::size_t k = 0; k < ns; ++k)
            jobs.push_back([&, pt, k] {
                const auto mean = cfg.mean_channel[pt / cfg.seeds.size()];
                const auto seed = cfg.seeds[pt % cfg.seeds.size()];
                logs[pt * ns + k] = run_one(cfg, Protocol::Dpcn, mean, seed, graphs[pt].graph,
                                            loads[pt], cfg.split_sizes[k]);
            });
    run_parallel(std::move(jobs), default_threads());

    TxFilter small;
    small.max_size = cfg.small_max_size;
    std::vector<SplitRow> rows;
    for (std::size_t pt = 0; pt < n_points; ++pt)
        for (std::size_t k = 0; k < ns; ++k) {
            const auto& log = logs[pt * ns + k];
            SplitRow r;
            r.split = cfg.split_sizes[k];
            r.topology = log.meta.topology;
            r.mean_channel = log.meta.mean_channel;
            r.seed = log.meta.seed;
            r.config_hash = log.meta.config_hash;
            auto lat = latency_stats(log, small);
            r.small_mean_latency_s = lat.mean;
            r.small_p95_latency_s = lat.p95;
            r.small_n = count_tx(log, small);
            r.small_success_volume = success_volume(log, small);
            r.success_ratio = success_ratio(log);
            r.success_volume = success_volume(log);
            rows.push_back(r);
        }
    write_file_atomic(out_dir / "sweep_split.csv", format_split_rows(rows));
    write_meta(cfg, logs, graphs.empty() ? std::vector<std::string>{} : graphs.front().warnings,
               out_dir / "sweep_split.csv.meta.json");
    return rows;
}

}  // namespace pcnsim
