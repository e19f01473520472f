#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <vector>

#include "pcnsim/baselines.hpp"
#include "pcnsim/dpcn.hpp"
#include "pcnsim/metrics.hpp"
#include "pcnsim/topology.hpp"

namespace pcnsim {

enum class EventKind : std::uint8_t {
    TxArrival,
    SubTxHop,
    AckHop,
    CancelHop,
    SenderWake,
    DeadlineExpiry,
    StatsTick,
    ProbeHop,
    ProbeReturn,
    ShardFailed,  // failure outcome delivered at the sender without a hop
};

const char* to_string(EventKind k);

struct Event {
    Seconds time = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::StatsTick;
    std::uint32_t id = 0;   // tx, shard, pair or probe index depending on kind
    std::uint32_t hop = 0;  // node position along a path

    /// Min-heap order on (time, seq).
    friend bool operator>(const Event& a, const Event& b) {
        return a.time > b.time || (a.time == b.time && a.seq > b.seq);
    }
};

struct RouterConfig {
    Seconds mark_threshold = 0.2;
    std::size_t queue_capacity = 8000;

    void validate() const;
};

enum class AuditLevel {
    None,     // ledger checks at stats ticks and at the end only
    Touched,  // conservation on every channel an event touched
    Full,     // conservation on every channel after every event
};

struct EngineConfig {
    Protocol protocol = Protocol::Dpcn;
    RouterConfig router;
    DpcnParams dpcn;
    SpiderParams spider;
    WaterfillingParams waterfilling;
    Seconds horizon = 10.0;
    Seconds stats_tick = 0.5;
    double warmup_fraction = 0.1;    // excluded from both ends of the horizon
    std::optional<Amount> forced_split;  // fixed DPCN split size (split sweeps)
    AuditLevel audit = AuditLevel::Touched;
    std::ostream* trace = nullptr;   // JSON-lines event dump when set

    void validate() const;
};

/// Outcome of forward_or_enqueue at a channel.
enum class HopOutcome { Forwarded, Enqueued, Dropped };

/// Router lock rule on one channel direction: lock and forward when the
/// spendable balance covers the shard, else queue while there is room, else drop.
HopOutcome forward_or_enqueue(Channel& ch, Dir d, ShardQueue& queue, const QueueEntry& key,
                              std::size_t queue_capacity);

/// Releases a lock taken in direction d. Success moves the funds across the
/// channel; failure or cancellation refunds them to the sending side.
void settle_lock(Channel& ch, Dir d, Amount amount, bool success);

/// Pops queue heads in order while the spendable balance covers them, locking
/// each one. Stops at the first head that does not fit.
std::vector<QueueEntry> drain_channel_queue(Channel& ch, Dir d, ShardQueue& queue);

/// True iff the shard waited longer than threshold in a channel queue. Once
/// marked, a shard stays marked.
bool mark_if_stale(SubTransaction& shard, Seconds enqueue_time, Seconds dequeue_time,
                   Seconds threshold);

class Simulator {
public:
    Simulator(EngineConfig cfg, Graph graph, std::vector<Transaction> workload);
    ~Simulator();
    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    /// Processes every event to quiescence and returns the outcome log.
    MetricsLog run();

    /// Dispatches a single event; false when the queue is empty.
    bool step();
    Seconds now() const;
    const Graph& graph() const;
    std::size_t queue_length(std::uint32_t channel, Dir d) const;
    std::uint64_t events_processed() const;

    /// Called after every event with the simulator in a consistent state.
    void set_observer(std::function<void(const Simulator&, const Event&)> fn);

    /// Throws std::logic_error if any channel violates conservation.
    void check_conservation() const;
    /// Throws std::logic_error if sender-side unconfirmed totals disagree with
    /// the in-flight shards the engine tracks.
    void check_unconfirmed() const;
    bool all_locks_released() const;

    MetricsLog collect() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Convenience wrapper: construct, run, collect.
MetricsLog run_simulation(const EngineConfig& cfg, const Graph& graph,
                          const std::vector<Transaction>& workload);

}  // namespace pcnsim
