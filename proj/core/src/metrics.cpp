#include "pcnsim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "pcnsim/io.hpp"

namespace pcnsim {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& s) {
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw InputError("bad number '" + s + "'");
    return v;
}

template <typename Int>
Int parse_int(const std::string& s) {
    Int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw InputError("bad integer '" + s + "'");
    return v;
}

std::vector<std::string> csv_lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

const char* status_name(TxStatus s) {
    switch (s) {
    case TxStatus::Pending: return "pending";
    case TxStatus::Succeeded: return "succeeded";
    case TxStatus::Failed: return "failed";
    }
    return "?";
}

TxStatus parse_status(const std::string& s) {
    if (s == "succeeded") return TxStatus::Succeeded;
    if (s == "failed") return TxStatus::Failed;
    if (s == "pending") return TxStatus::Pending;
    throw InputError("bad status '" + s + "'");
}

}  // namespace

bool TxFilter::matches(const TxRecord& t) const {
    if (size && t.size != *size) return false;
    if (max_size && t.size > *max_size) return false;
    if (has_deadline && t.has_deadline != *has_deadline) return false;
    return true;
}

std::string TxFilter::label() const {
    std::vector<std::string> terms;
    if (size) terms.push_back("size=" + std::to_string(*size));
    if (max_size) terms.push_back("max_size=" + std::to_string(*max_size));
    if (has_deadline) terms.push_back(*has_deadline ? "deadline" : "nodeadline");
    if (terms.empty()) return "all";
    std::string out = terms[0];
    for (std::size_t i = 1; i < terms.size(); ++i) out += "+" + terms[i];
    return out;
}

TxFilter TxFilter::parse(const std::string& s) {
    TxFilter f;
    if (s == "all" || s.empty()) return f;
    for (const auto& term : split(s, '+')) {
        if (term == "deadline") f.has_deadline = true;
        else if (term == "nodeadline") f.has_deadline = false;
        else if (term == "small") f.max_size = 30;
        else if (term.rfind("size=", 0) == 0) f.size = parse_int<Amount>(term.substr(5));
        else if (term.rfind("max_size=", 0) == 0) f.max_size = parse_int<Amount>(term.substr(9));
        else throw InputError("unknown filter term '" + term + "'");
    }
    return f;
}

namespace {

template <typename Fn>
void for_each_tx(const MetricsLog& log, const TxFilter& f, Fn&& fn) {
    for (const auto& t : log.txs) {
        if (f.window_only && !log.in_window(t)) continue;
        if (!f.matches(t)) continue;
        fn(t);
    }
}

}  // namespace

std::size_t count_tx(const MetricsLog& log, const TxFilter& f) {
    std::size_t n = 0;
    for_each_tx(log, f, [&](const TxRecord&) { ++n; });
    return n;
}

double success_ratio(const MetricsLog& log, const TxFilter& f) {
    std::size_t n = 0, ok = 0;
    for_each_tx(log, f, [&](const TxRecord& t) {
        ++n;
        if (t.status == TxStatus::Succeeded) ++ok;
    });
    return n == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(n);
}

double success_volume(const MetricsLog& log, const TxFilter& f) {
    Amount total = 0, ok = 0;
    for_each_tx(log, f, [&](const TxRecord& t) {
        total += t.size;
        ok += t.amount_succeeded;
    });
    return total == 0 ? 0.0 : static_cast<double>(ok) / static_cast<double>(total);
}

LatencyStats latency_stats(std::vector<double> lat) {
    LatencyStats s;
    s.n = lat.size();
    if (lat.empty()) return s;
    std::sort(lat.begin(), lat.end());
    double sum = 0;
    for (double v : lat) sum += v;
    s.mean = sum / static_cast<double>(lat.size());
    auto rank = [&](double q) {
        auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(lat.size())));
        return lat[std::clamp<std::size_t>(r, 1, lat.size()) - 1];
    };
    s.p50 = rank(0.50);
    s.p95 = rank(0.95);
    return s;
}

LatencyStats latency_stats(const MetricsLog& log, const TxFilter& f) {
    std::vector<double> lat;
    for_each_tx(log, f, [&](const TxRecord& t) {
        if (t.status == TxStatus::Succeeded) lat.push_back(t.latency);
    });
    return latency_stats(std::move(lat));
}

ResultRow summarize(const MetricsLog& log, const TxFilter& f) {
    ResultRow r;
    r.protocol = log.meta.protocol;
    r.topology = log.meta.topology;
    r.mean_channel = log.meta.mean_channel;
    r.seed = log.meta.seed;
    r.filter = f.label();
    r.success_ratio = success_ratio(log, f);
    r.success_volume = success_volume(log, f);
    auto lat = latency_stats(log, f);
    r.mean_latency_s = lat.mean;
    r.p95_latency_s = lat.p95;
    r.n_tx = count_tx(log, f);
    return r;
}

std::string format_results(const std::vector<ResultRow>& rows) {
    std::string out = std::string(kResultsHeader) + "\n";
    for (const auto& r : rows) {
        out += r.protocol + "," + r.topology + "," + std::to_string(r.mean_channel) + "," +
               std::to_string(r.seed) + "," + r.filter + "," + format_double(r.success_ratio) +
               "," + format_double(r.success_volume) + "," + format_double(r.mean_latency_s) +
               "," + format_double(r.p95_latency_s) + "," + std::to_string(r.n_tx) + "\n";
    }
    return out;
}

std::vector<ResultRow> parse_results(const std::string& csv) {
    auto lines = csv_lines(csv);
    if (lines.empty() || lines[0] != kResultsHeader) throw InputError("results CSV header mismatch");
    std::vector<ResultRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto f = split(lines[i], ',');
        if (f.size() != 10) throw InputError("results CSV line " + std::to_string(i + 1));
        ResultRow r;
        r.protocol = f[0];
        r.topology = f[1];
        r.mean_channel = parse_int<Amount>(f[2]);
        r.seed = parse_int<std::uint64_t>(f[3]);
        r.filter = f[4];
        r.success_ratio = parse_double(f[5]);
        r.success_volume = parse_double(f[6]);
        r.mean_latency_s = parse_double(f[7]);
        r.p95_latency_s = parse_double(f[8]);
        r.n_tx = parse_int<std::size_t>(f[9]);
        rows.push_back(r);
    }
    return rows;
}

void write_results(const std::vector<ResultRow>& rows, const std::filesystem::path& path) {
    write_file_atomic(path, format_results(rows));
}

std::string format_tx_csv(const MetricsLog& log) {
    std::string out = "tx_id,size,deadline,status,latency_s,n_shards\n";
    for (const auto& t : log.txs) {
        if (!log.in_window(t)) continue;
        out += std::to_string(t.id) + "," + std::to_string(t.size) + "," +
               (t.has_deadline ? format_double(t.deadline) : std::string()) + "," +
               status_name(t.status) + "," +
               (t.status == TxStatus::Succeeded ? format_double(t.latency) : std::string()) + "," +
               std::to_string(t.n_shards) + "\n";
    }
    return out;
}

std::string format_shard_csv(const MetricsLog& log) {
    std::string out = "tx_id,amount,success,path,marked\n";
    for (std::size_t i = 0; i < log.txs.size(); ++i) {
        const auto& t = log.txs[i];
        if (!log.in_window(t)) continue;
        for (std::size_t s = 0; s < t.n_shards; ++s) {
            const auto& sh = log.shards[log.first_shard[i] + s];
            out += std::to_string(t.id) + "," + std::to_string(sh.amount) + "," +
                   (sh.success ? "1" : "0") + "," + std::to_string(sh.path_index) + "," +
                   (sh.marked ? "1" : "0") + "\n";
        }
    }
    return out;
}

MetricsLog parse_tx_logs(const std::string& tx_csv, const std::string& shard_csv) {
    MetricsLog log;
    log.meta.window_start = -kNever;
    log.meta.window_end = kNever;
    auto lines = csv_lines(tx_csv);
    if (lines.empty() || lines[0] != "tx_id,size,deadline,status,latency_s,n_shards")
        throw InputError("per-tx CSV header mismatch");
    for (std::size_t i = 1; i < lines.size(); ++i) {
        auto f = split(lines[i], ',');
        if (f.size() != 6) throw InputError("per-tx CSV line " + std::to_string(i + 1));
        TxRecord t;
        t.id = parse_int<std::uint64_t>(f[0]);
        t.size = parse_int<Amount>(f[1]);
        t.has_deadline = !f[2].empty();
        if (t.has_deadline) t.deadline = parse_double(f[2]);
        t.status = parse_status(f[3]);
        if (!f[4].empty()) t.latency = parse_double(f[4]);
        t.n_shards = parse_int<std::uint32_t>(f[5]);
        log.first_shard.push_back(0);
        log.txs.push_back(t);
    }
    auto slines = csv_lines(shard_csv);
    if (slines.empty() || slines[0] != "tx_id,amount,success,path,marked")
        throw InputError("per-shard CSV header mismatch");
    std::size_t tx_i = 0, seen = 0;
    for (std::size_t i = 1; i < slines.size(); ++i) {
        auto f = split(slines[i], ',');
        if (f.size() != 5) throw InputError("per-shard CSV line " + std::to_string(i + 1));
        ShardRecord s;
        s.parent = parse_int<std::uint64_t>(f[0]);
        s.amount = parse_int<Amount>(f[1]);
        s.success = f[2] == "1";
        s.path_index = parse_int<std::uint32_t>(f[3]);
        s.marked = f[4] == "1";
        while (tx_i < log.txs.size() && seen == log.txs[tx_i].n_shards) {
            ++tx_i;
            seen = 0;
        }
        if (tx_i >= log.txs.size() || log.txs[tx_i].id != s.parent)
            throw InputError("per-shard CSV out of step with per-tx CSV at line " +
                             std::to_string(i + 1));
        if (seen == 0) log.first_shard[tx_i] = log.shards.size();
        if (s.success) log.txs[tx_i].amount_succeeded += s.amount;
        log.shards.push_back(s);
        ++seen;
    }
    return log;
}

void write_tx_logs(const MetricsLog& log, const std::filesystem::path& tx_path,
                   const std::filesystem::path& shard_path) {
    write_file_atomic(tx_path, format_tx_csv(log));
    write_file_atomic(shard_path, format_shard_csv(log));
}

}  // namespace pcnsim
