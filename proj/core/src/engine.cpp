#include "pcnsim/engine.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <stdexcept>
#include <utility>

#include "pcnsim/io.hpp"

#define PCNSIM_CHECK(cond, msg)                                                       \
    do {                                                                              \
        if (!(cond)) throw std::logic_error(std::string("engine invariant: ") + msg); \
    } while (0)

namespace pcnsim {

const char* to_string(EventKind k) {
    switch (k) {
    case EventKind::TxArrival: return "TxArrival";
    case EventKind::SubTxHop: return "SubTxHop";
    case EventKind::AckHop: return "AckHop";
    case EventKind::CancelHop: return "CancelHop";
    case EventKind::SenderWake: return "SenderWake";
    case EventKind::DeadlineExpiry: return "DeadlineExpiry";
    case EventKind::StatsTick: return "StatsTick";
    case EventKind::ProbeHop: return "ProbeHop";
    case EventKind::ProbeReturn: return "ProbeReturn";
    case EventKind::ShardFailed: return "ShardFailed";
    }
    return "?";
}

void RouterConfig::validate() const {
    if (!(mark_threshold > 0)) throw InputError("router mark threshold must be > 0");
    if (queue_capacity < 1) throw InputError("router.queue_capacity must be >= 1");
}

void EngineConfig::validate() const {
    router.validate();
    dpcn.validate();
    if (spider.mtu < 1) throw InputError("spider.mtu must be >= 1");
    if (waterfilling.mtu < 1) throw InputError("waterfilling.mtu must be >= 1");
    if (!(waterfilling.retry > 0)) throw InputError("waterfilling.retry_ms must be > 0");
    if (!(horizon > 0)) throw InputError("horizon must be > 0");
    if (!(stats_tick > 0)) throw InputError("stats tick must be > 0");
    if (!(warmup_fraction >= 0 && warmup_fraction < 0.5))
        throw InputError("warmup_fraction must be in [0, 0.5)");
    if (forced_split && *forced_split < 1) throw InputError("forced split must be >= 1");
}

HopOutcome forward_or_enqueue(Channel& ch, Dir d, ShardQueue& queue, const QueueEntry& key,
                              std::size_t queue_capacity) {
    const int i = idx(d);
    if (ch.balance[i] >= key.amount) {
        ch.balance[i] -= key.amount;
        ch.locked[i] += key.amount;
        return HopOutcome::Forwarded;
    }
    if (queue.size() < queue_capacity) {
        queue.push(key);
        return HopOutcome::Enqueued;
    }
    return HopOutcome::Dropped;
}

void settle_lock(Channel& ch, Dir d, Amount amount, bool success) {
    const int i = idx(d);
    PCNSIM_CHECK(ch.locked[i] >= amount, "settling more than is locked");
    ch.locked[i] -= amount;
    ch.balance[success ? idx(flip(d)) : i] += amount;
}

std::vector<QueueEntry> drain_channel_queue(Channel& ch, Dir d, ShardQueue& queue) {
    std::vector<QueueEntry> out;
    const int i = idx(d);
    while (!queue.empty() && ch.balance[i] >= queue.front().amount) {
        auto e = queue.pop();
        ch.balance[i] -= e.amount;
        ch.locked[i] += e.amount;
        out.push_back(e);
    }
    return out;
}

bool mark_if_stale(SubTransaction& shard, Seconds enqueue_time, Seconds dequeue_time,
                   Seconds threshold) {
    if (dequeue_time - enqueue_time > threshold) shard.marked = true;
    return shard.marked;
}

// ---------------------------------------------------------------------------

namespace {

enum class Phase : std::uint8_t {
    SenderQueued,   // waiting at the end host (window or probe)
    ChannelQueued,  // waiting in a channel queue at node `pos`
    InFlight,       // crossing the channel out of node `pos - 1`, or at node `pos`
    Returning,      // accepted by the receiver; success ack travelling back
    Unwinding,      // failure/cancel travelling back
    Done,
};

struct ShardState {
    SubTransaction sub;
    std::uint32_t tx = 0;
    std::uint32_t pair = 0;
    std::uint32_t pos = 0;
    Phase phase = Phase::SenderQueued;
    bool cancelled = false;
    bool sent = false;  // counted in the sender's unconfirmed total
    bool success = false;
    Seconds enqueue_time = 0;
    QueueEntry qkey;
};

struct TxState {
    Transaction tx;
    std::uint32_t pair = 0;
    std::uint32_t first_shard = 0;
    std::uint32_t n_shards = 0;
    std::uint32_t acked_ok = 0;
    Seconds completed_at = 0;
};

struct PairState {
    NodeId sender = 0;
    NodeId receiver = 0;
    std::vector<PathState> paths;
    std::vector<Amount> inflight;  // engine-side ledger, audited against unconfirmed
    // Waterfilling.
    ShardQueue wf_queue;
    std::vector<Amount> probe_min;
    std::uint32_t probes_outstanding = 0;
    bool wake_pending = false;
};

struct ProbeState {
    std::uint32_t pair = 0;
    ProbeMessage msg;
};

}  // namespace

struct Simulator::Impl {
    EngineConfig cfg;
    Graph graph;
    std::vector<Transaction> workload;

    std::priority_queue<Event, std::vector<Event>, std::greater<>> heap;
    std::uint64_t next_seq = 0;
    Seconds clock = 0;
    std::uint64_t processed = 0;
    std::uint64_t fifo_seq = 0;
    std::uint64_t drops = 0;
    std::uint64_t marks = 0;

    std::vector<ShardQueue> queues[2];
    std::vector<TxState> txs;
    std::vector<ShardState> shards;
    std::vector<PairState> pairs;
    std::map<std::pair<NodeId, NodeId>, std::uint32_t> pair_index;
    std::vector<ProbeState> probes;
    std::size_t next_arrival = 0;

    std::vector<std::uint32_t> touched;
    std::function<void(const Simulator&, const Event&)> observer;

    Impl(EngineConfig c, Graph g, std::vector<Transaction> w)
        : cfg(std::move(c)), graph(std::move(g)), workload(std::move(w)) {
        cfg.validate();
        queues[0].resize(graph.channels.size());
        queues[1].resize(graph.channels.size());
        for (std::size_t i = 1; i < workload.size(); ++i)
            PCNSIM_CHECK(workload[i - 1].created_at <= workload[i].created_at,
                         "workload not time-ordered");
        txs.reserve(workload.size());
        if (!workload.empty()) schedule(workload[0].created_at, EventKind::TxArrival, 0);
        schedule(cfg.stats_tick, EventKind::StatsTick, 0);
    }

    bool strict() const { return cfg.protocol == Protocol::Dpcn; }

    void schedule(Seconds t, EventKind k, std::uint32_t id, std::uint32_t hop = 0) {
        heap.push(Event{t, next_seq++, k, id, hop});
    }

    const Path& path_of(const ShardState& s) const {
        return pairs[s.pair].paths[s.sub.path_index].path;
    }

    Channel& hop_channel(const ShardState& s, std::uint32_t pos) {
        auto ci = path_of(s).hops[pos].channel;
        touched.push_back(ci);
        return graph.channels[ci];
    }

    QueueEntry channel_key(const ShardState& s) {
        if (cfg.protocol == Protocol::Dpcn) return deadline_entry(s.sub);
        return fifo_entry(s.sub, clock, fifo_seq++);
    }

    QueueEntry sender_key(const ShardState& s) { return channel_key(s); }

    std::uint32_t pair_for(NodeId s, NodeId r) {
        auto [it, fresh] = pair_index.try_emplace({s, r}, static_cast<std::uint32_t>(pairs.size()));
        if (fresh) {
            PairState ps;
            ps.sender = s;
            ps.receiver = r;
            auto routes = k_widest_disjoint_paths(graph, s, r, cfg.dpcn.k_paths);
            for (std::uint32_t i = 0; i < routes.size(); ++i)
                ps.paths.push_back(make_path_state(i, std::move(routes[i]), graph, cfg.dpcn));
            ps.inflight.assign(ps.paths.size(), 0);
            ps.probe_min.assign(ps.paths.size(), 0);
            pairs.push_back(std::move(ps));
        }
        return it->second;
    }

    // ---- router mechanics --------------------------------------------------

    void forward(std::uint32_t sid, std::uint32_t pos) {
        auto& s = shards[sid];
        const auto& hop = path_of(s).hops[pos];
        auto& ch = hop_channel(s, pos);
        auto key = channel_key(s);
        s.pos = pos;
        switch (forward_or_enqueue(ch, hop.dir, queues[idx(hop.dir)][hop.channel], key,
                                   cfg.router.queue_capacity)) {
        case HopOutcome::Forwarded:
            s.phase = Phase::InFlight;
            schedule(clock + ch.delay(), EventKind::SubTxHop, sid, pos + 1);
            break;
        case HopOutcome::Enqueued:
            s.phase = Phase::ChannelQueued;
            s.enqueue_time = clock;
            s.qkey = key;
            break;
        case HopOutcome::Dropped:
            ++drops;
            unwind(sid, pos);
            break;
        }
    }

    void drain_channel(std::uint32_t ci, Dir d) {
        auto& ch = graph.channels[ci];
        touched.push_back(ci);
        for (const auto& e : drain_channel_queue(ch, d, queues[idx(d)][ci])) {
            auto sid = static_cast<std::uint32_t>(e.sub_id);
            auto& s = shards[sid];
            PCNSIM_CHECK(s.phase == Phase::ChannelQueued, "drained shard not queued");
            const bool was = s.sub.marked;
            if (mark_if_stale(s.sub, s.enqueue_time, clock, cfg.router.mark_threshold) && !was)
                ++marks;
            s.phase = Phase::InFlight;
            schedule(clock + ch.delay(), EventKind::SubTxHop, sid, s.pos + 1);
        }
    }

    void unwind(std::uint32_t sid, std::uint32_t pos) {
        auto& s = shards[sid];
        s.phase = Phase::Unwinding;
        s.pos = pos;
        if (pos == 0) {
            schedule(clock, EventKind::ShardFailed, sid);
        } else {
            const auto& ch = graph.channels[path_of(s).hops[pos - 1].channel];
            schedule(clock + ch.delay(), EventKind::CancelHop, sid, pos - 1);
        }
    }

    void on_subtx_hop(std::uint32_t sid, std::uint32_t pos) {
        auto& s = shards[sid];
        PCNSIM_CHECK(s.phase == Phase::InFlight, "hop for shard not in flight");
        s.pos = pos;
        if (s.cancelled) {
            unwind(sid, pos);
            return;
        }
        const auto& path = path_of(s);
        if (pos == path.hops.size()) {
            s.phase = Phase::Returning;
            s.success = true;
            const auto& ch = graph.channels[path.hops[pos - 1].channel];
            schedule(clock + ch.delay(), EventKind::AckHop, sid, pos - 1);
            return;
        }
        forward(sid, pos);
    }

    void on_ack_hop(std::uint32_t sid, std::uint32_t pos) {
        auto& s = shards[sid];
        PCNSIM_CHECK(s.phase == Phase::Returning, "ack for shard not returning");
        const auto hop = path_of(s).hops[pos];
        settle_lock(hop_channel(s, pos), hop.dir, s.sub.amount, true);
        drain_channel(hop.channel, flip(hop.dir));
        if (pos == 0) {
            deliver_success(sid);
        } else {
            const auto& prev = graph.channels[path_of(s).hops[pos - 1].channel];
            schedule(clock + prev.delay(), EventKind::AckHop, sid, pos - 1);
        }
    }

    void on_cancel_hop(std::uint32_t sid, std::uint32_t pos) {
        auto& s = shards[sid];
        PCNSIM_CHECK(s.phase == Phase::Unwinding, "cancel for shard not unwinding");
        const auto hop = path_of(s).hops[pos];
        settle_lock(hop_channel(s, pos), hop.dir, s.sub.amount, false);
        drain_channel(hop.channel, hop.dir);
        if (pos == 0) {
            deliver_failure(sid);
        } else {
            const auto& prev = graph.channels[path_of(s).hops[pos - 1].channel];
            schedule(clock + prev.delay(), EventKind::CancelHop, sid, pos - 1);
        }
    }

    // ---- end hosts -----------------------------------------------------------

    void mark_sent(std::uint32_t sid) {
        auto& s = shards[sid];
        s.sent = true;
        s.sub.time_sent = clock;
        pairs[s.pair].inflight[s.sub.path_index] += s.sub.amount;
    }

    void release_sent(ShardState& s) {
        if (!s.sent) return;
        s.sent = false;
        pairs[s.pair].inflight[s.sub.path_index] -= s.sub.amount;
    }

    void drain_path(std::uint32_t pair, std::uint32_t p) {
        auto& ps = pairs[pair].paths[p];
        for (const auto& e : drain_sender_queue(ps, strict())) {
            auto sid = static_cast<std::uint32_t>(e.sub_id);
            PCNSIM_CHECK(shards[sid].phase == Phase::SenderQueued, "released shard not queued");
            mark_sent(sid);
            forward(sid, 0);
        }
    }

    void on_tx_arrival(std::uint32_t ti) {
        if (ti + 1 < workload.size())
            schedule(workload[ti + 1].created_at, EventKind::TxArrival, ti + 1);
        PCNSIM_CHECK(ti == txs.size(), "arrivals out of order");
        TxState t;
        t.tx = workload[ti];
        t.tx.id = ti;
        t.tx.status = TxStatus::Pending;
        PCNSIM_CHECK(t.tx.amount >= 1, "transaction amount must be >= 1");
        PCNSIM_CHECK(t.tx.sender != t.tx.receiver, "self-payment");
        t.pair = pair_for(t.tx.sender, t.tx.receiver);
        auto& pair = pairs[t.pair];
        if (pair.paths.empty()) {
            t.first_shard = static_cast<std::uint32_t>(shards.size());
            t.tx.status = TxStatus::Failed;
            txs.push_back(t);
            return;
        }

        Amount size = 0;
        switch (cfg.protocol) {
        case Protocol::Dpcn:
            size = cfg.forced_split ? *cfg.forced_split : split_size(t.tx, pair.paths, cfg.dpcn);
            break;
        case Protocol::Spider: size = cfg.spider.mtu; break;
        case Protocol::Waterfilling: size = cfg.waterfilling.mtu; break;
        }
        auto subs = split_transaction(t.tx, size, shards.size());
        t.first_shard = static_cast<std::uint32_t>(shards.size());
        t.n_shards = static_cast<std::uint32_t>(subs.size());
        txs.push_back(t);
        schedule(t.tx.expires_at(cfg.dpcn.global_timeout), EventKind::DeadlineExpiry, ti);

        for (auto& sub : subs) {
            ShardState s;
            s.sub = sub;
            s.tx = ti;
            s.pair = t.pair;
            shards.push_back(s);
        }
        if (cfg.protocol == Protocol::Waterfilling) {
            for (std::uint32_t sid = t.first_shard; sid < t.first_shard + t.n_shards; ++sid) {
                auto& s = shards[sid];
                s.qkey = fifo_entry(s.sub, clock, fifo_seq++);
                pair.wf_queue.push(s.qkey);
            }
            if (pair.probes_outstanding == 0) start_probe_round(t.pair);
            return;
        }
        for (std::uint32_t sid = t.first_shard; sid < t.first_shard + t.n_shards; ++sid) {
            auto& s = shards[sid];
            const auto p = select_path(s.sub.amount, pair.paths, strict());
            s.qkey = sender_key(s);
            s.sub.path_index = p;
            if (admit_to_path(pair.paths[p], s.sub, clock, s.qkey, strict()) == Admission::Sent) {
                mark_sent(sid);
                forward(sid, 0);
            } else {
                s.phase = Phase::SenderQueued;
            }
        }
    }

    void deliver_success(std::uint32_t sid) {
        auto& s = shards[sid];
        s.phase = Phase::Done;
        auto& pair = pairs[s.pair];
        auto& ps = pair.paths[s.sub.path_index];
        const auto ack = make_ack(s.sub, pair.receiver, true);
        release_sent(s);
        switch (cfg.protocol) {
        case Protocol::Dpcn:
            on_ack_update(ps, ack, clock, cfg.dpcn);
            drain_path(s.pair, s.sub.path_index);
            break;
        case Protocol::Spider:
            spider_window_adjust(ps, ack, cfg.spider);
            ps.unconfirmed -= ack.amount;
            drain_path(s.pair, s.sub.path_index);
            break;
        case Protocol::Waterfilling:
            ps.unconfirmed -= ack.amount;
            break;
        }
        auto& t = txs[s.tx];
        ++t.acked_ok;
        if (t.tx.status == TxStatus::Pending && t.acked_ok == t.n_shards) {
            t.tx.status = TxStatus::Succeeded;
            t.completed_at = clock;
        }
    }

    void deliver_failure(std::uint32_t sid) {
        auto& s = shards[sid];
        s.phase = Phase::Done;
        if (s.sent) {
            release_sent(s);
            auto& ps = pairs[s.pair].paths[s.sub.path_index];
            ps.unconfirmed -= s.sub.amount;
            if (cfg.protocol != Protocol::Waterfilling) drain_path(s.pair, s.sub.path_index);
        }
        if (txs[s.tx].tx.status == TxStatus::Pending) fail_tx(s.tx);
    }

    void fail_tx(std::uint32_t ti) {
        auto& t = txs[ti];
        t.tx.status = TxStatus::Failed;
        std::vector<std::pair<std::uint32_t, Dir>> channels;
        std::vector<std::uint32_t> paths;
        for (std::uint32_t sid = t.first_shard; sid < t.first_shard + t.n_shards; ++sid) {
            auto& s = shards[sid];
            switch (s.phase) {
            case Phase::SenderQueued:
                if (cfg.protocol == Protocol::Waterfilling) {
                    PCNSIM_CHECK(pairs[s.pair].wf_queue.erase(s.qkey), "queued shard missing");
                } else {
                    auto& ps = pairs[s.pair].paths[s.sub.path_index];
                    PCNSIM_CHECK(ps.sender_queue.erase(s.qkey), "queued shard missing");
                    paths.push_back(s.sub.path_index);
                }
                s.phase = Phase::Done;
                break;
            case Phase::ChannelQueued: {
                const auto hop = path_of(s).hops[s.pos];
                PCNSIM_CHECK(queues[idx(hop.dir)][hop.channel].erase(s.qkey),
                             "channel-queued shard missing");
                channels.emplace_back(hop.channel, hop.dir);
                unwind(sid, s.pos);
                break;
            }
            case Phase::InFlight: s.cancelled = true; break;
            case Phase::Returning:
            case Phase::Unwinding:
            case Phase::Done: break;
            }
        }
        // Removing a blocked head can unblock the rest of a queue.
        for (auto [ci, d] : channels) drain_channel(ci, d);
        std::sort(paths.begin(), paths.end());
        paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
        for (auto p : paths) drain_path(t.pair, p);
    }

    // ---- waterfilling probes ---------------------------------------------------

    void start_probe_round(std::uint32_t pi) {
        auto& pair = pairs[pi];
        pair.probes_outstanding = static_cast<std::uint32_t>(pair.paths.size());
        for (std::uint32_t p = 0; p < pair.paths.size(); ++p) {
            auto id = static_cast<std::uint32_t>(probes.size());
            ProbeState pr;
            pr.pair = pi;
            pr.msg.path_index = p;
            probes.push_back(pr);
            on_probe_hop(id, 0);
        }
    }

    void on_probe_hop(std::uint32_t id, std::uint32_t pos) {
        auto& pr = probes[id];
        const auto& path = pairs[pr.pair].paths[pr.msg.path_index].path;
        if (pos == path.hops.size()) {
            schedule(clock + path.total_delay(graph), EventKind::ProbeReturn, id);
            return;
        }
        const auto hop = path.hops[pos];
        const auto& ch = graph.channels[hop.channel];
        pr.msg.visit(ch.balance[idx(hop.dir)]);
        schedule(clock + ch.delay(), EventKind::ProbeHop, id, pos + 1);
    }

    void on_probe_return(std::uint32_t id) {
        const auto& pr = probes[id];
        auto& pair = pairs[pr.pair];
        pair.probe_min[pr.msg.path_index] = pr.msg.min_balance_seen;
        PCNSIM_CHECK(pair.probes_outstanding > 0, "unexpected probe");
        if (--pair.probes_outstanding == 0) wf_dispatch(pr.pair);
    }

    void wf_dispatch(std::uint32_t pi) {
        auto& pair = pairs[pi];
        std::vector<Amount> available(pair.paths.size());
        for (std::size_t p = 0; p < available.size(); ++p)
            available[p] = pair.probe_min[p] - pair.paths[p].unconfirmed;
        while (!pair.wf_queue.empty()) {
            const auto head = pair.wf_queue.front();
            auto pick = waterfilling_pick(available, head.amount);
            if (!pick) break;
            pair.wf_queue.pop();
            auto sid = static_cast<std::uint32_t>(head.sub_id);
            auto& s = shards[sid];
            s.sub.path_index = *pick;
            pair.paths[*pick].unconfirmed += s.sub.amount;
            available[*pick] -= s.sub.amount;
            mark_sent(sid);
            forward(sid, 0);
        }
        if (!pair.wf_queue.empty() && !pair.wake_pending) {
            pair.wake_pending = true;
            schedule(clock + cfg.waterfilling.retry, EventKind::SenderWake, pi);
        }
    }

    void on_sender_wake(std::uint32_t pi) {
        auto& pair = pairs[pi];
        pair.wake_pending = false;
        if (!pair.wf_queue.empty() && pair.probes_outstanding == 0) start_probe_round(pi);
    }

    // ---- audits --------------------------------------------------------------------

    void check_conservation() const {
        for (std::size_t i = 0; i < graph.channels.size(); ++i)
            PCNSIM_CHECK(graph.channels[i].conserved(),
                         "conservation violated on channel " + std::to_string(i));
    }

    void check_unconfirmed() const {
        for (const auto& pair : pairs)
            for (std::size_t p = 0; p < pair.paths.size(); ++p)
                PCNSIM_CHECK(pair.paths[p].unconfirmed == pair.inflight[p],
                             "unconfirmed disagrees with in-flight ledger");
    }

    bool all_locks_released() const {
        for (const auto& ch : graph.channels)
            if (ch.locked[0] != 0 || ch.locked[1] != 0) return false;
        return true;
    }

    void trace(const Event& e) {
        auto& os = *cfg.trace;
        os << "{\"t\":" << format_double(e.time) << ",\"seq\":" << e.seq << ",\"kind\":\""
           << to_string(e.kind) << "\",\"id\":" << e.id << ",\"hop\":" << e.hop << "}\n";
    }

    bool step(const Simulator& self) {
        if (heap.empty()) return false;
        const Event e = heap.top();
        heap.pop();
        PCNSIM_CHECK(e.time >= clock, "event dispatched out of time order");
        clock = e.time;
        ++processed;
        if (cfg.trace) trace(e);
        touched.clear();
        switch (e.kind) {
        case EventKind::TxArrival: on_tx_arrival(e.id); break;
        case EventKind::SubTxHop: on_subtx_hop(e.id, e.hop); break;
        case EventKind::AckHop: on_ack_hop(e.id, e.hop); break;
        case EventKind::CancelHop: on_cancel_hop(e.id, e.hop); break;
        case EventKind::ShardFailed: deliver_failure(e.id); break;
        case EventKind::SenderWake: on_sender_wake(e.id); break;
        case EventKind::DeadlineExpiry:
            if (txs[e.id].tx.status == TxStatus::Pending) fail_tx(e.id);
            break;
        case EventKind::ProbeHop: on_probe_hop(e.id, e.hop); break;
        case EventKind::ProbeReturn: on_probe_return(e.id); break;
        case EventKind::StatsTick:
            check_unconfirmed();
            if (!heap.empty()) schedule(clock + cfg.stats_tick, EventKind::StatsTick, 0);
            break;
        }
        switch (cfg.audit) {
        case AuditLevel::None: break;
        case AuditLevel::Touched:
            for (auto ci : touched)
                PCNSIM_CHECK(graph.channels[ci].conserved(),
                             "conservation violated on channel " + std::to_string(ci));
            break;
        case AuditLevel::Full: check_conservation(); break;
        }
        if (observer) observer(self, e);
        return true;
    }

    MetricsLog collect() const {
        MetricsLog log;
        log.meta.protocol = std::string(to_string(cfg.protocol));
        log.meta.horizon = cfg.horizon;
        log.meta.window_start = cfg.warmup_fraction * cfg.horizon;
        log.meta.window_end = (1.0 - cfg.warmup_fraction) * cfg.horizon;
        log.meta.events = processed;
        log.meta.drops = drops;
        log.meta.marks = marks;
        log.txs.reserve(txs.size());
        log.shards.reserve(shards.size());
        for (const auto& t : txs) {
            TxRecord r;
            r.id = t.tx.id;
            r.sender = t.tx.sender;
            r.receiver = t.tx.receiver;
            r.size = t.tx.amount;
            r.has_deadline = t.tx.has_deadline;
            r.deadline = t.tx.deadline;
            r.created_at = t.tx.created_at;
            r.status = t.tx.status;
            r.latency = t.tx.status == TxStatus::Succeeded ? t.completed_at - t.tx.created_at : 0;
            r.n_shards = t.n_shards;
            log.first_shard.push_back(log.shards.size());
            for (std::uint32_t sid = t.first_shard; sid < t.first_shard + t.n_shards; ++sid) {
                const auto& s = shards[sid];
                ShardRecord sr;
                sr.parent = t.tx.id;
                sr.amount = s.sub.amount;
                sr.success = s.success;
                sr.path_index = s.sub.path_index;
                sr.marked = s.sub.marked;
                if (s.success) r.amount_succeeded += s.sub.amount;
                log.shards.push_back(sr);
            }
            log.txs.push_back(r);
        }
        return log;
    }
};

Simulator::Simulator(EngineConfig cfg, Graph graph, std::vector<Transaction> workload)
    : impl_(std::make_unique<Impl>(std::move(cfg), std::move(graph), std::move(workload))) {}

Simulator::~Simulator() = default;

bool Simulator::step() { return impl_->step(*this); }
Seconds Simulator::now() const { return impl_->clock; }
const Graph& Simulator::graph() const { return impl_->graph; }
std::uint64_t Simulator::events_processed() const { return impl_->processed; }

std::size_t Simulator::queue_length(std::uint32_t channel, Dir d) const {
    return impl_->queues[idx(d)][channel].size();
}

void Simulator::set_observer(std::function<void(const Simulator&, const Event&)> fn) {
    impl_->observer = std::move(fn);
}

void Simulator::check_conservation() const { impl_->check_conservation(); }
void Simulator::check_unconfirmed() const { impl_->check_unconfirmed(); }
bool Simulator::all_locks_released() const { return impl_->all_locks_released(); }

MetricsLog Simulator::run() {
    while (step()) {
    }
    impl_->check_conservation();
    impl_->check_unconfirmed();
    PCNSIM_CHECK(impl_->all_locks_released(), "locks outstanding at quiescence");
    for (const auto& s : impl_->shards)
        PCNSIM_CHECK(s.phase == Phase::Done, "shard unresolved at quiescence");
    for (const auto& t : impl_->txs)
        PCNSIM_CHECK(t.tx.status != TxStatus::Pending, "transaction unresolved at quiescence");
    return collect();
}

MetricsLog Simulator::collect() const { return impl_->collect(); }

MetricsLog run_simulation(const EngineConfig& cfg, const Graph& graph,
                          const std::vector<Transaction>& workload) {
    Simulator sim(cfg, graph, workload);
    return sim.run();
}

}  // namespace pcnsim
