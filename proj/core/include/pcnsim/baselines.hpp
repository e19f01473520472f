#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pcnsim/dpcn.hpp"

namespace pcnsim {

/// Deadline-agnostic multipath baseline: fixed-MTU shards, marked-ack AIMD.
struct SpiderParams {
    Amount mtu = 1;
    double g = 8.0;
    double beta = 1.3;
    double w_min = 1.0;
};

std::vector<SubTransaction> spider_split(const Transaction& tx, Amount mtu,
                                         std::uint64_t first_sub_id);

/// Marked ack: W *= (1 - 1/g), floored at w_min. Unmarked: W += beta, capped
/// at the path bottleneck. Reads no deadline field.
void spider_window_adjust(PathState& ps, const AckMessage& ack, const SpiderParams& p);

/// Arrival time of a shard at a queue together with its arrival sequence.
struct FifoStamp {
    Seconds arrival = 0;
    std::uint64_t seq = 0;
};

std::strong_ordering spider_queue_order(const FifoStamp& a, const FifoStamp& b);

/// Balance probe walking a path. min_balance_seen only ever decreases.
struct ProbeMessage {
    std::uint32_t path_index = 0;
    Amount min_balance_seen = 0;
    std::uint32_t hop_cursor = 0;
    bool started = false;

    void visit(Amount directional_balance) {
        min_balance_seen = started ? std::min(min_balance_seen, directional_balance)
                                   : directional_balance;
        started = true;
        ++hop_cursor;
    }
};

struct WaterfillingParams {
    Amount mtu = 1;
    Seconds retry = 0.1;
};

/// Path with the largest available balance if it covers `amount`; ties go to
/// the lower index. available[i] = probed bottleneck balance - unconfirmed.
std::optional<std::uint32_t> waterfilling_pick(std::span<const Amount> available, Amount amount);

}  // namespace pcnsim
