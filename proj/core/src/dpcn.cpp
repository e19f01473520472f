#include "pcnsim/dpcn.hpp"

#include <algorithm>
#include <cmath>

namespace pcnsim {

void DpcnParams::validate() const {
    if (!(c > 1)) throw InputError("dpcn.c must be > 1");
    if (!(e > 0 && e <= 1)) throw InputError("dpcn.e must be in (0, 1]");
    if (!(y > 0 && y <= 1)) throw InputError("dpcn.y must be in (0, 1]");
    if (!(g > 1)) throw InputError("dpcn.g must be > 1");
    if (!(beta > 0)) throw InputError("dpcn.beta must be > 0");
    if (!(delta > 0)) throw InputError("dpcn.delta_ms must be > 0");
    if (tx_threshold < 1) throw InputError("dpcn.tx_threshold must be >= 1");
    if (fixed_split_nodl < 1) throw InputError("dpcn.fixed_split_nodl must be >= 1");
    if (k_paths < 1) throw InputError("dpcn.k_paths must be >= 1");
    if (!(w_min >= 1)) throw InputError("dpcn.w_min must be >= 1");
    if (!(global_timeout > 0)) throw InputError("global timeout must be > 0");
}

Amount PathState::headroom() const {
    return static_cast<Amount>(std::floor(window)) - unconfirmed;
}

PathState make_path_state(std::uint32_t index, Path path, const Graph& g, const DpcnParams& p) {
    PathState ps;
    ps.path_index = index;
    ps.window_cap = std::max(p.w_min, static_cast<double>(path.bottleneck_capacity));
    ps.window = std::max(p.w_min, 0.5 * static_cast<double>(path.bottleneck_capacity));
    ps.et = 2.0 * path.total_delay(g);
    ps.path = std::move(path);
    return ps;
}

double urgency_x(Seconds deadline, Seconds p_avg_time, bool invert) {
    return invert ? p_avg_time / deadline : deadline / p_avg_time;
}

double split_factor_gamma(double x, double c, double b) {
    return 1.0 / (1.0 + std::pow(c, -(x - b)));
}

Amount split_size(const Transaction& tx, std::span<const PathState> paths, const DpcnParams& p) {
    if (!tx.has_deadline) return std::clamp<Amount>(p.fixed_split_nodl, 1, tx.amount);
    double ws = 0, et = 0;
    for (const auto& ps : paths) {
        ws += ps.window;
        et += ps.et;
    }
    ws /= static_cast<double>(paths.size());
    et /= static_cast<double>(paths.size());
    const double gamma = split_factor_gamma(urgency_x(tx.deadline, et, p.invert_urgency), p.c, p.b);
    // Round half up.
    const auto size = static_cast<Amount>(std::floor(ws * gamma + 0.5));
    return std::clamp<Amount>(size, 1, tx.amount);
}

std::vector<SubTransaction> split_transaction(const Transaction& tx, Amount size,
                                              std::uint64_t first_sub_id) {
    std::vector<SubTransaction> out;
    out.reserve(static_cast<std::size_t>((tx.amount + size - 1) / size));
    Amount left = tx.amount;
    while (left > 0) {
        SubTransaction s;
        s.sub_id = first_sub_id + out.size();
        s.parent_id = tx.id;
        s.amount = std::min(size, left);
        s.created_at = tx.created_at;
        s.has_deadline = tx.has_deadline;
        s.deadline = tx.deadline;
        left -= s.amount;
        out.push_back(s);
    }
    return out;
}

std::strong_ordering schedule_order(const SubTransaction& a, const SubTransaction& b,
                                    Seconds now) {
    if (a.has_deadline != b.has_deadline)
        return a.has_deadline ? std::strong_ordering::less : std::strong_ordering::greater;
    if (a.has_deadline) {
        const Seconds ra = a.remaining(now), rb = b.remaining(now);
        if (ra < rb) return std::strong_ordering::less;
        if (rb < ra) return std::strong_ordering::greater;
    }
    if (auto c = a.amount <=> b.amount; c != 0) return c;
    return a.sub_id <=> b.sub_id;
}

bool admissible(const PathState& ps, Amount amount, bool strict) {
    if (ps.unconfirmed == 0) return true;
    const double want = static_cast<double>(amount + ps.unconfirmed);
    return strict ? want < ps.window : want <= ps.window;
}

Admission admit_to_path(PathState& ps, SubTransaction& shard, Seconds now,
                        const QueueEntry& order_key, bool strict) {
    shard.path_index = ps.path_index;
    if (ps.sender_queue.empty() && admissible(ps, shard.amount, strict)) {
        ps.unconfirmed += shard.amount;
        shard.time_sent = now;
        return Admission::Sent;
    }
    ps.sender_queue.push(order_key);
    // A shard that outranks everything already waiting may go straight out.
    if (ps.sender_queue.front().sub_id == order_key.sub_id &&
        admissible(ps, shard.amount, strict)) {
        ps.sender_queue.pop();
        ps.unconfirmed += shard.amount;
        shard.time_sent = now;
        return Admission::Sent;
    }
    return Admission::Queued;
}

std::uint32_t select_path(Amount amount, std::span<const PathState> paths, bool strict) {
    std::uint32_t best_ok = 0, best_any = 0;
    bool have_ok = false;
    for (std::uint32_t i = 0; i < paths.size(); ++i) {
        const auto& ps = paths[i];
        if (ps.headroom() > paths[best_any].headroom()) best_any = i;
        if (ps.sender_queue.empty() && admissible(ps, amount, strict)) {
            if (!have_ok || ps.headroom() > paths[best_ok].headroom()) best_ok = i;
            have_ok = true;
        }
    }
    return have_ok ? best_ok : best_any;
}

WindowTrace window_step(PathState& ps, const AckMessage& ack, Seconds now, const DpcnParams& p) {
    ps.tot_tx += 1;
    if (ack.isMarked) ps.tot_tx_mark += 1;
    if (ps.tot_tx > p.tx_threshold) {
        const double k = static_cast<double>(ps.tot_tx_mark) / static_cast<double>(ps.tot_tx);
        ps.alpha = (1 - p.e) * ps.alpha + p.e * k;
        ps.tot_tx = 0;
        ps.tot_tx_mark = 0;
    }
    const Seconds t = now - ack.timeSent;
    ps.et = (1 - p.y) * ps.et + p.y * t;
    WindowTrace tr;
    tr.alpha = ps.alpha;
    tr.et = ps.et;
    tr.d = ps.et / (ack.hasDeadline ? ack.deadline : p.global_timeout);
    // 0^d == 0 for d > 0, so an uncongested path always grows.
    tr.p = ps.alpha > 0 ? std::pow(ps.alpha, tr.d) : 0.0;
    if (tr.p > 0)
        ps.window = std::max(p.w_min, ps.window * (1 - tr.p / p.g));
    else
        ps.window = ps.window + p.beta;
    ps.window = std::clamp(ps.window, p.w_min, ps.window_cap);
    tr.window = ps.window;
    return tr;
}

WindowTrace on_ack_update(PathState& ps, const AckMessage& ack, Seconds now, const DpcnParams& p) {
    auto tr = window_step(ps, ack, now, p);
    ps.unconfirmed -= ack.amount;
    return tr;
}

std::vector<QueueEntry> drain_sender_queue(PathState& ps, bool strict) {
    std::vector<QueueEntry> out;
    while (!ps.sender_queue.empty() && admissible(ps, ps.sender_queue.front().amount, strict)) {
        out.push_back(ps.sender_queue.pop());
        ps.unconfirmed += out.back().amount;
    }
    return out;
}

}  // namespace pcnsim
