#include "pcnsim/config.hpp"

#include <algorithm>
#include <set>

#include "pcnsim/io.hpp"

namespace pcnsim {

using nlohmann::json;

namespace {

void check_keys(const json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
    if (!obj.is_object()) throw InputError(where + " must be an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [k, _] : obj.items())
        if (!ok.count(k)) throw InputError("unknown key '" + k + "' in " + where);
}

template <typename T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw InputError(where + "." + key + ": " + e.what());
    }
}

const char* kind_name(TopologySpec::Kind k) {
    switch (k) {
    case TopologySpec::Kind::WattsStrogatz: return "watts_strogatz";
    case TopologySpec::Kind::BarabasiAlbert: return "barabasi_albert";
    case TopologySpec::Kind::ScaleFree: return "scale_free";
    case TopologySpec::Kind::File: return "file";
    }
    return "?";
}

const char* dist_name(CapacityDist::Kind k) {
    switch (k) {
    case CapacityDist::Kind::LogNormal: return "lognormal";
    case CapacityDist::Kind::Constant: return "constant";
    case CapacityDist::Kind::Uniform: return "uniform";
    case CapacityDist::Kind::Scale: return "scale";
    }
    return "?";
}

const char* audit_name(AuditLevel a) {
    switch (a) {
    case AuditLevel::None: return "none";
    case AuditLevel::Touched: return "touched";
    case AuditLevel::Full: return "full";
    }
    return "?";
}

TopologySpec parse_topology_spec(const json& j, const std::filesystem::path& base) {
    const std::string where = "topology";
    check_keys(j, {"kind", "label", "n", "ring_degree", "rewire_prob", "attach_m", "edges", "path",
                   "seed", "delay_ms"},
               where);
    TopologySpec t;
    std::string kind = "watts_strogatz";
    read(j, "kind", kind, where);
    if (kind == "watts_strogatz") t.kind = TopologySpec::Kind::WattsStrogatz;
    else if (kind == "barabasi_albert") t.kind = TopologySpec::Kind::BarabasiAlbert;
    else if (kind == "scale_free") t.kind = TopologySpec::Kind::ScaleFree;
    else if (kind == "file") t.kind = TopologySpec::Kind::File;
    else throw InputError("unknown topology kind '" + kind + "'");
    read(j, "label", t.label, where);
    read(j, "n", t.n, where);
    read(j, "ring_degree", t.ring_degree, where);
    read(j, "rewire_prob", t.rewire_prob, where);
    read(j, "attach_m", t.attach_m, where);
    read(j, "edges", t.edges, where);
    read(j, "seed", t.seed, where);
    read(j, "delay_ms", t.delay_ms, where);
    if (j.contains("path")) {
        std::filesystem::path p = j.at("path").get<std::string>();
        t.path = p.is_relative() && !base.empty() ? base / p : p;
    }
    if (t.kind == TopologySpec::Kind::File && t.path.empty())
        throw InputError("topology.kind 'file' requires 'path'");
    if (!(t.delay_ms > 0)) throw InputError("topology.delay_ms must be > 0");
    return t;
}

WorkloadConfig parse_workload_config(const json& j) {
    const std::string where = "workload";
    check_keys(j, {"rate_per_host", "receivers_per_host", "size_weights", "deadline_table",
                   "deadline_fraction", "deadline_mode", "deadline_scale", "horizon_s"},
               where);
    WorkloadConfig w;
    read(j, "rate_per_host", w.rate_per_host, where);
    read(j, "receivers_per_host", w.receivers_per_host, where);
    read(j, "deadline_fraction", w.deadline_fraction, where);
    read(j, "deadline_scale", w.deadline_scale, where);
    read(j, "horizon_s", w.horizon, where);
    if (j.contains("deadline_mode")) {
        auto m = j.at("deadline_mode").get<std::string>();
        if (m == "coin") w.deadline_mode = DeadlineMode::Coin;
        else if (m == "stratified") w.deadline_mode = DeadlineMode::Stratified;
        else throw InputError("unknown workload.deadline_mode '" + m + "'");
    }
    auto size_key = [](const std::string& k) {
        try {
            std::size_t used = 0;
            auto v = std::stoll(k, &used);
            if (used != k.size()) throw std::invalid_argument(k);
            return static_cast<Amount>(v);
        } catch (const std::exception&) {
            throw InputError("transaction size key '" + k + "' is not an integer");
        }
    };
    if (j.contains("size_weights")) {
        w.size_weights.clear();
        for (const auto& [k, v] : j.at("size_weights").items())
            w.size_weights.emplace_back(size_key(k), v.get<double>());
        std::sort(w.size_weights.begin(), w.size_weights.end());
    }
    if (j.contains("deadline_table")) {
        w.deadline_table.clear();
        for (const auto& [k, v] : j.at("deadline_table").items())
            w.deadline_table[size_key(k)] = v.get<double>();
    }
    return w;
}

}  // namespace

std::string TopologySpec::name() const {
    if (!label.empty()) return label;
    switch (kind) {
    case Kind::WattsStrogatz: return "sw" + std::to_string(n);
    case Kind::BarabasiAlbert: return "ba" + std::to_string(n);
    case Kind::ScaleFree: return "sf" + std::to_string(n);
    case Kind::File: return path.stem().string();
    }
    return "?";
}

void RunConfig::validate() const {
    if (mean_channel.empty()) throw InputError("mean_channel list is empty");
    for (auto m : mean_channel)
        if (m <= 0) throw InputError("mean_channel values must be positive");
    if (seeds.empty()) throw InputError("seeds list is empty");
    if (protocols.empty()) throw InputError("protocols list is empty");
    if (split_sizes.empty()) throw InputError("split_sizes list is empty");
    for (auto s : split_sizes)
        if (s < 1) throw InputError("split sizes must be >= 1");
    if (topology.kind != TopologySpec::Kind::File)
        workload.validate(topology.n);
    for (auto p : protocols) engine(p).validate();
}

EngineConfig RunConfig::engine(Protocol p) const {
    EngineConfig e;
    e.protocol = p;
    e.router = router;
    e.router.mark_threshold = dpcn.delta;
    e.dpcn = dpcn;
    e.spider = spider;
    e.spider.g = dpcn.g;
    e.spider.beta = dpcn.beta;
    e.spider.w_min = dpcn.w_min;
    e.waterfilling = waterfilling;
    e.horizon = workload.horizon;
    e.stats_tick = stats_tick;
    e.warmup_fraction = warmup_fraction;
    e.audit = audit;
    return e;
}

RunConfig parse_run_config(const json& j, const std::filesystem::path& base_dir) {
    check_keys(j, {"name", "topology", "capacity", "mean_channel", "protocol", "protocols", "dpcn",
                   "spider", "waterfilling", "workload", "router", "engine", "seeds",
                   "split_sizes", "small_max_size", "output_dir", "write_tx_logs"},
               "config");
    RunConfig c;
    read(j, "name", c.name, "config");
    if (j.contains("topology")) c.topology = parse_topology_spec(j.at("topology"), base_dir);
    if (j.contains("capacity")) {
        const auto& cj = j.at("capacity");
        check_keys(cj, {"dist", "sigma", "lo", "hi"}, "capacity");
        std::string dist = "lognormal";
        read(cj, "dist", dist, "capacity");
        c.capacity = CapacityDist::parse(dist);
        read(cj, "sigma", c.capacity.sigma, "capacity");
        read(cj, "lo", c.capacity.uniform_lo, "capacity");
        read(cj, "hi", c.capacity.uniform_hi, "capacity");
        c.capacity_set = true;
    }
    if (!c.capacity_set && c.topology.kind == TopologySpec::Kind::File)
        c.capacity.kind = CapacityDist::Kind::Scale;
    if (j.contains("mean_channel")) {
        const auto& m = j.at("mean_channel");
        c.mean_channel = m.is_array() ? m.get<std::vector<Amount>>()
                                      : std::vector<Amount>{m.get<Amount>()};
    }
    if (j.contains("protocol")) c.protocol = parse_protocol(j.at("protocol").get<std::string>());
    if (j.contains("protocols")) {
        c.protocols.clear();
        for (const auto& p : j.at("protocols")) c.protocols.push_back(parse_protocol(p.get<std::string>()));
    }

    // Sampled-LN topologies use a gentler window law unless overridden.
    if (c.topology.kind == TopologySpec::Kind::File) {
        c.dpcn.g = 7.0;
        c.dpcn.beta = 0.8;
    }
    if (j.contains("dpcn")) {
        const auto& d = j.at("dpcn");
        const std::string w = "dpcn";
        check_keys(d, {"c", "b", "e", "y", "g", "beta", "delta_ms", "tx_threshold",
                       "fixed_split_nodl", "k_paths", "w_min", "invert_urgency"},
                   w);
        read(d, "c", c.dpcn.c, w);
        read(d, "b", c.dpcn.b, w);
        read(d, "e", c.dpcn.e, w);
        read(d, "y", c.dpcn.y, w);
        read(d, "g", c.dpcn.g, w);
        read(d, "beta", c.dpcn.beta, w);
        double delta_ms = c.dpcn.delta * 1000.0;
        read(d, "delta_ms", delta_ms, w);
        c.dpcn.delta = delta_ms / 1000.0;
        read(d, "tx_threshold", c.dpcn.tx_threshold, w);
        read(d, "fixed_split_nodl", c.dpcn.fixed_split_nodl, w);
        read(d, "k_paths", c.dpcn.k_paths, w);
        read(d, "w_min", c.dpcn.w_min, w);
        read(d, "invert_urgency", c.dpcn.invert_urgency, w);
    }
    if (j.contains("spider")) {
        check_keys(j.at("spider"), {"mtu"}, "spider");
        read(j.at("spider"), "mtu", c.spider.mtu, "spider");
    }
    if (j.contains("waterfilling")) {
        const auto& wf = j.at("waterfilling");
        check_keys(wf, {"mtu", "retry_ms"}, "waterfilling");
        read(wf, "mtu", c.waterfilling.mtu, "waterfilling");
        double retry_ms = c.waterfilling.retry * 1000.0;
        read(wf, "retry_ms", retry_ms, "waterfilling");
        c.waterfilling.retry = retry_ms / 1000.0;
    }
    if (j.contains("workload")) c.workload = parse_workload_config(j.at("workload"));
    if (j.contains("router")) {
        check_keys(j.at("router"), {"queue_capacity"}, "router");
        read(j.at("router"), "queue_capacity", c.router.queue_capacity, "router");
    }
    if (j.contains("engine")) {
        const auto& e = j.at("engine");
        check_keys(e, {"global_timeout_s", "stats_tick_s", "warmup_fraction", "audit", "trace"},
                   "engine");
        read(e, "global_timeout_s", c.dpcn.global_timeout, "engine");
        read(e, "stats_tick_s", c.stats_tick, "engine");
        read(e, "warmup_fraction", c.warmup_fraction, "engine");
        read(e, "trace", c.trace, "engine");
        if (e.contains("audit")) {
            auto a = e.at("audit").get<std::string>();
            if (a == "none") c.audit = AuditLevel::None;
            else if (a == "touched") c.audit = AuditLevel::Touched;
            else if (a == "full") c.audit = AuditLevel::Full;
            else throw InputError("unknown engine.audit '" + a + "'");
        }
    }
    read(j, "seeds", c.seeds, "config");
    read(j, "split_sizes", c.split_sizes, "config");
    read(j, "small_max_size", c.small_max_size, "config");
    read(j, "write_tx_logs", c.write_tx_logs, "config");
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
    c.validate();
    return c;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    const auto text = read_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(path.string() + ": parse error at line " +
                         std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
    }
    try {
        return parse_run_config(j, path.parent_path());
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

json to_json(const RunConfig& c) {
    json j;
    j["name"] = c.name;
    json t;
    t["kind"] = kind_name(c.topology.kind);
    t["label"] = c.topology.name();
    t["seed"] = c.topology.seed;
    switch (c.topology.kind) {
    case TopologySpec::Kind::WattsStrogatz:
        t["n"] = c.topology.n;
        t["ring_degree"] = c.topology.ring_degree;
        t["rewire_prob"] = c.topology.rewire_prob;
        t["delay_ms"] = c.topology.delay_ms;
        break;
    case TopologySpec::Kind::BarabasiAlbert:
        t["n"] = c.topology.n;
        t["attach_m"] = c.topology.attach_m;
        t["delay_ms"] = c.topology.delay_ms;
        break;
    case TopologySpec::Kind::ScaleFree:
        t["n"] = c.topology.n;
        t["edges"] = c.topology.edges;
        t["delay_ms"] = c.topology.delay_ms;
        break;
    case TopologySpec::Kind::File: t["path"] = c.topology.path.generic_string(); break;
    }
    j["topology"] = t;
    j["capacity"] = {{"dist", dist_name(c.capacity.kind)},
                     {"sigma", c.capacity.sigma},
                     {"lo", c.capacity.uniform_lo},
                     {"hi", c.capacity.uniform_hi}};
    j["mean_channel"] = c.mean_channel;
    j["protocol"] = std::string(to_string(c.protocol));
    json protos = json::array();
    for (auto p : c.protocols) protos.push_back(std::string(to_string(p)));
    j["protocols"] = protos;
    j["dpcn"] = {{"c", c.dpcn.c},
                 {"b", c.dpcn.b},
                 {"e", c.dpcn.e},
                 {"y", c.dpcn.y},
                 {"g", c.dpcn.g},
                 {"beta", c.dpcn.beta},
                 {"delta_ms", c.dpcn.delta * 1000.0},
                 {"tx_threshold", c.dpcn.tx_threshold},
                 {"fixed_split_nodl", c.dpcn.fixed_split_nodl},
                 {"k_paths", c.dpcn.k_paths},
                 {"w_min", c.dpcn.w_min},
                 {"invert_urgency", c.dpcn.invert_urgency}};
    j["spider"] = {{"mtu", c.spider.mtu}};
    j["waterfilling"] = {{"mtu", c.waterfilling.mtu}, {"retry_ms", c.waterfilling.retry * 1000.0}};
    json sw = json::object(), dt = json::object();
    for (const auto& [size, w] : c.workload.size_weights) sw[std::to_string(size)] = w;
    for (const auto& [size, d] : c.workload.deadline_table) dt[std::to_string(size)] = d;
    j["workload"] = {{"rate_per_host", c.workload.rate_per_host},
                     {"receivers_per_host", c.workload.receivers_per_host},
                     {"size_weights", sw},
                     {"deadline_table", dt},
                     {"deadline_fraction", c.workload.deadline_fraction},
                     {"deadline_mode",
                      c.workload.deadline_mode == DeadlineMode::Coin ? "coin" : "stratified"},
                     {"deadline_scale", c.workload.deadline_scale},
                     {"horizon_s", c.workload.horizon}};
    j["router"] = {{"queue_capacity", c.router.queue_capacity}};
    j["engine"] = {{"global_timeout_s", c.dpcn.global_timeout},
                   {"stats_tick_s", c.stats_tick},
                   {"warmup_fraction", c.warmup_fraction},
                   {"audit", audit_name(c.audit)},
                   {"trace", c.trace}};
    j["seeds"] = c.seeds;
    j["split_sizes"] = c.split_sizes;
    j["small_max_size"] = c.small_max_size;
    j["output_dir"] = c.output_dir.generic_string();
    j["write_tx_logs"] = c.write_tx_logs;
    return j;
}

std::string config_hash(const RunConfig& cfg) {
    auto j = to_json(cfg);
    // Output location and seed list do not change what a single row computes.
    j.erase("output_dir");
    j.erase("seeds");
    return sha256_hex(j.dump());
}

}  // namespace pcnsim
