#include "pcnsim/workload.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pcnsim/io.hpp"

namespace pcnsim {

void WorkloadConfig::validate(std::size_t nodes) const {
    if (!(rate_per_host > 0)) throw InputError("workload.rate_per_host must be > 0");
    if (receivers_per_host < 1 || receivers_per_host + 1 > nodes)
        throw InputError("workload.receivers_per_host must be in [1, n - 1]");
    if (size_weights.empty()) throw InputError("workload.size_weights is empty");
    double sum = 0;
    for (const auto& [size, w] : size_weights) {
        if (size < 1) throw InputError("workload size must be >= 1");
        if (w < 0) throw InputError("workload weight must be >= 0");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InputError("workload.size_weights must sum to 1");
    if (!(deadline_fraction >= 0 && deadline_fraction <= 1))
        throw InputError("workload.deadline_fraction must be in [0, 1]");
    if (!(deadline_scale > 0)) throw InputError("workload.deadline_scale must be > 0");
    if (!(horizon > 0)) throw InputError("workload.horizon_s must be > 0");
    if (deadline_fraction > 0)
        for (const auto& [size, w] : size_weights)
            if (w > 0 && !deadline_table.count(size))
                throw InputError("no deadline for size " + std::to_string(size));
    for (const auto& [size, d] : deadline_table)
        if (!(d > 0)) throw InputError("deadline for size " + std::to_string(size) + " must be > 0");
}

std::map<Amount, Seconds> WorkloadConfig::effective_deadlines() const {
    auto out = deadline_table;
    for (auto& [size, d] : out) d *= deadline_scale;
    return out;
}

std::vector<Transaction> generate_workload(const WorkloadConfig& cfg, std::size_t nodes,
                                           std::uint64_t seed) {
    cfg.validate(nodes);
    std::mt19937_64 rng(seed);
    const auto deadlines = cfg.effective_deadlines();

    std::vector<double> weights;
    for (const auto& sw : cfg.size_weights) weights.push_back(sw.second);
    std::discrete_distribution<std::size_t> size_pick(weights.begin(), weights.end());
    std::exponential_distribution<double> gap(cfg.rate_per_host);
    std::uniform_real_distribution<double> coin(0.0, 1.0);

    // Fixed receiver set per host.
    std::vector<std::vector<NodeId>> receivers(nodes);
    for (NodeId h = 0; h < nodes; ++h) {
        std::vector<NodeId> peers;
        for (NodeId p = 0; p < nodes; ++p)
            if (p != h) peers.push_back(p);
        std::shuffle(peers.begin(), peers.end(), rng);
        peers.resize(cfg.receivers_per_host);
        std::sort(peers.begin(), peers.end());
        receivers[h] = std::move(peers);
    }

    std::vector<Transaction> out;
    const bool coin_mode = cfg.deadline_mode == DeadlineMode::Coin;
    for (NodeId h = 0; h < nodes; ++h) {
        std::uniform_int_distribution<std::size_t> recv_pick(0, receivers[h].size() - 1);
        for (Seconds t = gap(rng); t < cfg.horizon; t += gap(rng)) {
            Transaction tx;
            tx.sender = h;
            tx.receiver = receivers[h][recv_pick(rng)];
            tx.amount = cfg.size_weights[size_pick(rng)].first;
            tx.created_at = t;
            const bool with_deadline =
                coin_mode ? coin(rng) < cfg.deadline_fraction : true;
            if (with_deadline && cfg.deadline_fraction > 0) {
                tx.has_deadline = true;
                tx.deadline = deadlines.at(tx.amount);
            }
            out.push_back(tx);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Transaction& a, const Transaction& b) {
        return a.created_at < b.created_at || (a.created_at == b.created_at && a.sender < b.sender);
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].id = i;
    if (!coin_mode && cfg.deadline_fraction < 1.0 && cfg.deadline_fraction > 0.0)
        stratify_deadlines(out, 1.0 - cfg.deadline_fraction, seed ^ 0x5eed5eedULL);
    return out;
}

void stratify_deadlines(std::vector<Transaction>& txs, double no_deadline_share,
                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::map<Amount, std::vector<std::size_t>> buckets;
    for (std::size_t i = 0; i < txs.size(); ++i) buckets[txs[i].amount].push_back(i);
    for (auto& [size, members] : buckets) {
        // Guard against 0.2 * 100 evaluating to 19.999...
        const auto drop = static_cast<std::size_t>(
            std::floor(no_deadline_share * static_cast<double>(members.size()) + 1e-9));
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t j = 0; j < drop && j < members.size(); ++j) {
            txs[members[j]].has_deadline = false;
            txs[members[j]].deadline = 0;
        }
    }
}

std::string dump_workload(const std::vector<Transaction>& txs) {
    std::string out;
    for (const auto& tx : txs) {
        out += "{\"t\":" + format_double(tx.created_at) + ",\"s\":" + std::to_string(tx.sender) +
               ",\"r\":" + std::to_string(tx.receiver) + ",\"amt\":" + std::to_string(tx.amount) +
               ",\"ddl\":" + (tx.has_deadline ? format_double(tx.deadline) : "null") + "}\n";
    }
    return out;
}

std::vector<Transaction> parse_workload(const std::string& text) {
    std::vector<Transaction> out;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            auto j = nlohmann::json::parse(line);
            Transaction tx;
            tx.id = out.size();
            tx.created_at = j.at("t").get<double>();
            tx.sender = j.at("s").get<NodeId>();
            tx.receiver = j.at("r").get<NodeId>();
            tx.amount = j.at("amt").get<Amount>();
            if (!j.at("ddl").is_null()) {
                tx.has_deadline = true;
                tx.deadline = j.at("ddl").get<double>();
            }
            if (tx.amount < 1) throw InputError("amount must be >= 1");
            if (tx.has_deadline && !(tx.deadline > 0)) throw InputError("deadline must be > 0");
            if (!out.empty() && tx.created_at < out.back().created_at)
                throw InputError("workload not sorted by time");
            out.push_back(tx);
        } catch (const nlohmann::json::exception& e) {
            throw InputError("workload line " + std::to_string(lineno) + ": " + e.what());
        } catch (const InputError& e) {
            throw InputError("workload line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

std::vector<Transaction> load_workload(const std::filesystem::path& path) {
    return parse_workload(read_file(path));
}

}  // namespace pcnsim
