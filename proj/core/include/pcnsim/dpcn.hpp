#pragma once

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "pcnsim/messages.hpp"
#include "pcnsim/queueing.hpp"
#include "pcnsim/topology.hpp"

namespace pcnsim {

/// Sender-side and router-side constants of the deadline-aware protocol.
struct DpcnParams {
    double c = 8.0;          // split-curve base
    double b = 0.8;          // split-curve midpoint
    double e = 0.3;          // weight of a new congestion sample
    double y = 0.3;          // weight of a new completion-time sample
    double g = 8.0;          // multiplicative-decrease divisor
    double beta = 1.3;       // additive increase
    Seconds delta = 0.2;     // router marking threshold
    std::uint32_t tx_threshold = 20;
    Amount fixed_split_nodl = 20;
    std::uint32_t k_paths = 8;
    double w_min = 1.0;
    Seconds global_timeout = 5.0;  // deadline surrogate for deadline-free shards
    bool invert_urgency = false;   // use P_avgTime / deadline instead

    /// Throws InputError when a constant is outside its domain.
    void validate() const;
};

/// Per-(sender, receiver, path) controller state.
struct PathState {
    std::uint32_t path_index = 0;
    Path path;
    double window = 0;
    double window_cap = 0;  // bottleneck capacity
    Amount unconfirmed = 0;
    double alpha = 0;
    Seconds et = 0;
    std::uint32_t tot_tx = 0;
    std::uint32_t tot_tx_mark = 0;
    ShardQueue sender_queue;

    Amount headroom() const;
};

/// Window starts at half the bottleneck, ET at one round trip of link delays.
PathState make_path_state(std::uint32_t index, Path path, const Graph& g, const DpcnParams& p);

// ---- splitting --------------------------------------------------------------

double urgency_x(Seconds deadline, Seconds p_avg_time, bool invert = false);

/// Logistic split factor 1 / (1 + c^-(x - b)).
double split_factor_gamma(double x, double c, double b);

/// round(WS_avg * gamma(x)) clamped to [1, amount]; fixed size for
/// transactions without a deadline.
Amount split_size(const Transaction& tx, std::span<const PathState> paths, const DpcnParams& p);

/// floor(amount / size) shards of `size` plus the remainder, if any. Shard ids
/// are first_sub_id, first_sub_id + 1, ...
std::vector<SubTransaction> split_transaction(const Transaction& tx, Amount size,
                                              std::uint64_t first_sub_id);

// ---- scheduling ---------------------------------------------------------------

/// Deadline shards first, least remaining time first, then smaller amount,
/// then sub_id.
std::strong_ordering schedule_order(const SubTransaction& a, const SubTransaction& b,
                                    Seconds now);

// ---- window control ---------------------------------------------------------------

enum class Admission { Sent, Queued };

/// Strict form: amount + unconfirmed < W. The non-strict form (<=) is the
/// baseline rule. A path with nothing in flight always admits, so a window at
/// its floor cannot starve the path.
bool admissible(const PathState& ps, Amount amount, bool strict = true);

/// Sends (marks unconfirmed, stamps time_sent) or queues under `order_key`.
Admission admit_to_path(PathState& ps, SubTransaction& shard, Seconds now,
                        const QueueEntry& order_key, bool strict = true);

/// Max-headroom admissible path, else the max-headroom path; ties to lower index.
std::uint32_t select_path(Amount amount, std::span<const PathState> paths, bool strict = true);

/// Intermediate values of one window step.
struct WindowTrace {
    double alpha = 0;
    Seconds et = 0;
    double d = 0;  // ET over the shard's deadline
    double p = 0;  // alpha^d, 0 when alpha is 0
    double window = 0;
};

/// Path-window update on a success confirmation, then releases the acked
/// amount from unconfirmed.
WindowTrace on_ack_update(PathState& ps, const AckMessage& ack, Seconds now, const DpcnParams& p);

/// The window step alone, without touching unconfirmed.
WindowTrace window_step(PathState& ps, const AckMessage& ack, Seconds now, const DpcnParams& p);

/// Pops admissible shards from the head of the sender queue. Each popped
/// shard's amount is added to unconfirmed; returns them in order.
std::vector<QueueEntry> drain_sender_queue(PathState& ps, bool strict = true);

}  // namespace pcnsim
