#include "pcnsim/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "pcnsim/io.hpp"

namespace pcnsim {

namespace {

constexpr int kMaxGeneratorAttempts = 100;

void add_channel(Graph& g, NodeId a, NodeId b) {
    Channel ch;
    ch.u = std::min(a, b);
    ch.v = std::max(a, b);
    g.channels.push_back(ch);
}

void split_balances(Channel& ch) {
    ch.balance[0] = ch.capacity - ch.capacity / 2;
    ch.balance[1] = ch.capacity / 2;
    ch.locked[0] = ch.locked[1] = 0;
}

std::uint64_t derive_seed(std::uint64_t seed, int attempt) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(attempt)};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

}  // namespace

void Graph::rebuild_adjacency() {
    adjacency.assign(nodes, {});
    std::set<std::pair<NodeId, NodeId>> seen;
    for (std::uint32_t i = 0; i < channels.size(); ++i) {
        const auto& ch = channels[i];
        if (ch.u == ch.v) throw InputError("self-loop channel at node " + std::to_string(ch.u));
        if (ch.u >= nodes || ch.v >= nodes)
            throw InputError("channel " + std::to_string(i) + " references node out of range");
        if (!seen.emplace(ch.u, ch.v).second)
            throw InputError("duplicate channel " + std::to_string(ch.u) + "-" + std::to_string(ch.v));
        adjacency[ch.u].push_back(i);
        adjacency[ch.v].push_back(i);
    }
}

bool Graph::connected() const {
    if (nodes == 0) return false;
    std::vector<char> seen(nodes, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        NodeId n = stack.back();
        stack.pop_back();
        for (auto ci : adjacency[n]) {
            const auto& ch = channels[ci];
            NodeId m = ch.u == n ? ch.v : ch.u;
            if (!seen[m]) {
                seen[m] = 1;
                ++count;
                stack.push_back(m);
            }
        }
    }
    return count == nodes;
}

std::int64_t Graph::find_channel(NodeId a, NodeId b) const {
    for (auto ci : adjacency[a]) {
        const auto& ch = channels[ci];
        if ((ch.u == a && ch.v == b) || (ch.u == b && ch.v == a)) return ci;
    }
    return -1;
}

Seconds Path::total_delay(const Graph& g) const {
    Seconds sum = 0;
    for (const auto& h : hops) sum += g.channels[h.channel].delay();
    return sum;
}

// ---- generators -----------------------------------------------------------

Graph generate_watts_strogatz(std::size_t n, std::size_t ring_degree, double rewire_prob,
                              std::uint64_t seed) {
    if (n < 3) throw InputError("watts_strogatz: n must be >= 3");
    if (ring_degree % 2 != 0 || ring_degree == 0)
        throw InputError("watts_strogatz: ring_degree must be a positive even number");
    if (ring_degree >= n) throw InputError("watts_strogatz: ring_degree must be < n");
    if (!(rewire_prob >= 0.0 && rewire_prob <= 1.0))
        throw InputError("watts_strogatz: rewire_prob must be in [0, 1]");

    for (int attempt = 0; attempt < kMaxGeneratorAttempts; ++attempt) {
        std::mt19937_64 rng(attempt == 0 ? seed : derive_seed(seed, attempt));
        std::uniform_real_distribution<double> coin(0.0, 1.0);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);

        // Edge set keyed by (min, max) so rewiring can test for duplicates.
        std::set<std::pair<NodeId, NodeId>> edges;
        auto key = [](std::size_t a, std::size_t b) {
            return std::make_pair(static_cast<NodeId>(std::min(a, b)),
                                  static_cast<NodeId>(std::max(a, b)));
        };
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 1; j <= ring_degree / 2; ++j) edges.insert(key(i, (i + j) % n));

        std::vector<std::size_t> degree(n, ring_degree);
        if (rewire_prob > 0.0) {
            for (std::size_t j = 1; j <= ring_degree / 2; ++j) {
                for (std::size_t i = 0; i < n; ++i) {
                    std::size_t v = (i + j) % n;
                    if (coin(rng) >= rewire_prob) continue;
                    if (degree[i] >= n - 1) continue;
                    std::size_t w;
                    do {
                        w = pick(rng);
                    } while (w == i || edges.count(key(i, w)));
                    edges.erase(key(i, v));
                    edges.insert(key(i, w));
                    --degree[v];
                    ++degree[w];
                }
            }
        }

        Graph g;
        g.nodes = n;
        for (const auto& [a, b] : edges) add_channel(g, a, b);
        g.rebuild_adjacency();
        if (g.connected()) return g;
    }
    throw InputError("watts_strogatz: no connected graph after retries");
}

namespace {

// Preferential attachment from a star on (first + 1) nodes. attach[i] is the
// number of edges node i brings, for i > first.
Graph preferential_attachment(std::size_t n, std::size_t first,
                              const std::vector<std::size_t>& attach, std::mt19937_64& rng) {
    Graph g;
    g.nodes = n;
    std::vector<NodeId> repeated;
    for (std::size_t i = 1; i <= first; ++i) {
        add_channel(g, 0, static_cast<NodeId>(i));
        repeated.push_back(0);
        repeated.push_back(static_cast<NodeId>(i));
    }
    for (std::size_t src = first + 1; src < n; ++src) {
        const std::size_t m = attach[src];
        std::set<NodeId> targets;
        std::uniform_int_distribution<std::size_t> pick(0, repeated.size() - 1);
        while (targets.size() < m) targets.insert(repeated[pick(rng)]);
        for (NodeId t : targets) {
            add_channel(g, static_cast<NodeId>(src), t);
            repeated.push_back(t);
            repeated.push_back(static_cast<NodeId>(src));
        }
    }
    g.rebuild_adjacency();
    return g;
}

}  // namespace

Graph generate_barabasi_albert(std::size_t n, std::size_t attach_m, std::uint64_t seed) {
    if (attach_m < 1 || attach_m >= n)
        throw InputError("barabasi_albert: attach_m must satisfy 1 <= attach_m < n");
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> attach(n, attach_m);
    return preferential_attachment(n, attach_m, attach, rng);
}

Graph generate_scale_free_with_edges(std::size_t n, std::size_t edges, std::uint64_t seed) {
    if (n < 3) throw InputError("scale_free: n must be >= 3");
    if (edges < n - 1) throw InputError("scale_free: fewer edges than a spanning tree");
    // Base attach count m, with the surplus spread evenly over later nodes.
    std::size_t m = std::max<std::size_t>(1, edges / n);
    while (m > 1 && m * (n - m) > edges) --m;
    if (m * (n - m) > edges) throw InputError("scale_free: edge target too small");
    std::size_t surplus = edges - m * (n - m);
    const std::size_t later = n - m - 1;
    std::vector<std::size_t> attach(n, m);
    // Spread the surplus one edge per node per pass, evenly spaced.
    while (surplus > 0) {
        std::size_t added = 0;
        const std::size_t want = std::min(surplus, later);
        for (std::size_t i = 0; i < want; ++i) {
            std::size_t node = m + 1 + (i * later) / want;
            if (attach[node] < node) {
                ++attach[node];
                --surplus;
                ++added;
            }
        }
        if (added == 0) throw InputError("scale_free: edge target too large");
    }
    std::mt19937_64 rng(seed);
    return preferential_attachment(n, m, attach, rng);
}

void assign_delays_log_uniform(Graph& g, double lo_ms, double hi_ms, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(std::log(lo_ms), std::log(hi_ms));
    for (auto& ch : g.channels) ch.delay_ms = std::clamp(std::exp(u(rng)), lo_ms, hi_ms);
}

// ---- capacities -------------------------------------------------------------

CapacityDist CapacityDist::parse(const std::string& name) {
    CapacityDist d;
    if (name == "lognormal") d.kind = Kind::LogNormal;
    else if (name == "constant") d.kind = Kind::Constant;
    else if (name == "uniform") d.kind = Kind::Uniform;
    else if (name == "scale") d.kind = Kind::Scale;
    else throw InputError("unknown capacity distribution '" + name + "'");
    return d;
}

Graph assign_capacities(Graph g, Amount mean_capacity, const CapacityDist& dist,
                        std::uint64_t seed) {
    if (mean_capacity <= 0) throw InputError("mean_capacity must be positive");
    if (g.channels.empty()) return g;
    std::mt19937_64 rng(seed);
    std::vector<double> raw(g.channels.size());
    switch (dist.kind) {
    case CapacityDist::Kind::Constant:
        std::fill(raw.begin(), raw.end(), 1.0);
        break;
    case CapacityDist::Kind::LogNormal: {
        if (!(dist.sigma > 0)) throw InputError("lognormal sigma must be positive");
        std::lognormal_distribution<double> ln(0.0, dist.sigma);
        for (auto& r : raw) r = ln(rng);
        break;
    }
    case CapacityDist::Kind::Uniform: {
        if (!(dist.uniform_lo > 0 && dist.uniform_hi >= dist.uniform_lo))
            throw InputError("uniform capacity bounds must satisfy 0 < lo <= hi");
        std::uniform_real_distribution<double> un(dist.uniform_lo, dist.uniform_hi);
        for (auto& r : raw) r = un(rng);
        break;
    }
    case CapacityDist::Kind::Scale:
        for (std::size_t i = 0; i < raw.size(); ++i)
            raw[i] = static_cast<double>(std::max<Amount>(1, g.channels[i].capacity));
        break;
    }
    const double sum = std::accumulate(raw.begin(), raw.end(), 0.0);
    const double factor = static_cast<double>(mean_capacity) * raw.size() / sum;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        auto& ch = g.channels[i];
        ch.capacity = std::max<Amount>(1, std::llround(raw[i] * factor));
        split_balances(ch);
    }
    return g;
}

// ---- files --------------------------------------------------------------------

LoadedTopology parse_topology(const std::string& text) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError("topology parse error at line " +
                         std::to_string(line_of_offset(text, e.byte)) + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("channels"))
        throw InputError("topology must be an object with 'nodes' and 'channels'");
    LoadedTopology out;
    Graph& g = out.graph;
    const auto nodes = doc.at("nodes").get<std::int64_t>();
    if (nodes <= 0) throw InputError("topology 'nodes' must be positive");
    g.nodes = static_cast<std::size_t>(nodes);
    const auto& chans = doc.at("channels");
    if (!chans.is_array() || chans.empty()) throw InputError("topology has no channels");
    for (std::size_t i = 0; i < chans.size(); ++i) {
        const auto& c = chans[i];
        auto where = "channel #" + std::to_string(i);
        for (const auto& [k, _] : c.items())
            if (k != "u" && k != "v" && k != "capacity" && k != "delay_ms")
                throw InputError(where + ": unknown key '" + k + "'");
        if (!c.contains("u") || !c.contains("v") || !c.contains("capacity"))
            throw InputError(where + ": requires u, v, capacity");
        auto u = c.at("u").get<std::int64_t>();
        auto v = c.at("v").get<std::int64_t>();
        auto cap = c.at("capacity").get<std::int64_t>();
        if (u < 0 || v < 0 || u >= nodes || v >= nodes)
            throw InputError(where + ": endpoint out of range");
        if (cap <= 0) throw InputError(where + ": capacity must be positive");
        Channel ch;
        ch.u = static_cast<NodeId>(std::min(u, v));
        ch.v = static_cast<NodeId>(std::max(u, v));
        ch.capacity = cap;
        double delay = c.value("delay_ms", 30.0);
        if (!(delay > 0)) throw InputError(where + ": delay_ms must be positive");
        double clamped = std::clamp(delay, kMinFileDelayMs, kMaxFileDelayMs);
        if (clamped != delay)
            out.warnings.push_back(where + ": delay_ms clamped to " + std::to_string(clamped));
        ch.delay_ms = clamped;
        split_balances(ch);
        g.channels.push_back(ch);
    }
    g.rebuild_adjacency();
    if (!g.connected()) out.warnings.push_back("topology is not connected");
    return out;
}

LoadedTopology load_topology(const std::filesystem::path& path) {
    return parse_topology(read_file(path));
}

std::string serialize_topology(const Graph& g) {
    std::ostringstream os;
    os << "{\"nodes\": " << g.nodes << ", \"channels\": [\n";
    for (std::size_t i = 0; i < g.channels.size(); ++i) {
        const auto& ch = g.channels[i];
        os << "  {\"u\": " << ch.u << ", \"v\": " << ch.v << ", \"capacity\": " << ch.capacity
           << ", \"delay_ms\": " << format_double(ch.delay_ms) << "}"
           << (i + 1 < g.channels.size() ? ",\n" : "\n");
    }
    os << "]}\n";
    return os.str();
}

void save_topology(const Graph& g, const std::filesystem::path& path) {
    write_file_atomic(path, serialize_topology(g));
}

// ---- routing --------------------------------------------------------------------

namespace {

struct Label {
    Amount width = 0;
    std::uint32_t hops = 0;
    std::int64_t pred_channel = -1;
    NodeId pred = 0;
};

std::optional<Path> widest_path(const Graph& g, NodeId src, NodeId dst,
                                const std::vector<char>& banned) {
    constexpr Amount kInf = std::numeric_limits<Amount>::max();
    std::vector<Label> label(g.nodes);
    std::vector<char> done(g.nodes, 0);
    label[src].width = kInf;
    // Max-heap on width; then fewer hops; then smaller node id.
    using Item = std::tuple<Amount, std::int64_t, std::int64_t>;  // width, -hops, -node
    std::priority_queue<Item> pq;
    pq.emplace(kInf, 0, -static_cast<std::int64_t>(src));
    while (!pq.empty()) {
        auto [w, nh, nn] = pq.top();
        pq.pop();
        const auto n = static_cast<NodeId>(-nn);
        if (done[n]) continue;
        done[n] = 1;
        if (n == dst) break;
        for (auto ci : g.adjacency[n]) {
            if (banned[ci]) continue;
            const auto& ch = g.channels[ci];
            NodeId m = ch.u == n ? ch.v : ch.u;
            if (done[m]) continue;
            Amount nw = std::min(w, ch.capacity);
            std::uint32_t hops = label[n].hops + 1;
            auto& lm = label[m];
            bool better = nw > lm.width || (nw == lm.width && lm.width > 0 &&
                                            (hops < lm.hops || (hops == lm.hops && n < lm.pred)));
            if (!better) continue;
            lm = Label{nw, hops, ci, n};
            pq.emplace(nw, -static_cast<std::int64_t>(hops), -static_cast<std::int64_t>(m));
        }
    }
    if (label[dst].width == 0) return std::nullopt;
    Path p;
    p.bottleneck_capacity = label[dst].width;
    for (NodeId n = dst; n != src; n = label[n].pred) {
        const auto ci = static_cast<std::uint32_t>(label[n].pred_channel);
        const auto& ch = g.channels[ci];
        Dir d = ch.u == label[n].pred ? Dir::Forward : Dir::Backward;
        p.hops.push_back({ci, d});
        p.nodes.push_back(n);
    }
    p.nodes.push_back(src);
    std::reverse(p.hops.begin(), p.hops.end());
    std::reverse(p.nodes.begin(), p.nodes.end());
    return p;
}

}  // namespace

std::vector<Path> k_widest_disjoint_paths(const Graph& g, NodeId src, NodeId dst, std::size_t k) {
    if (src == dst) throw InputError("k_widest_disjoint_paths: src == dst");
    if (k < 1) throw InputError("k_widest_disjoint_paths: k must be >= 1");
    if (src >= g.nodes || dst >= g.nodes) throw InputError("k_widest_disjoint_paths: bad node");
    std::vector<char> banned(g.channels.size(), 0);
    std::vector<Path> out;
    while (out.size() < k) {
        auto p = widest_path(g, src, dst, banned);
        if (!p) break;
        for (const auto& h : p->hops) banned[h.channel] = 1;
        out.push_back(std::move(*p));
    }
    return out;
}

}  // namespace pcnsim
