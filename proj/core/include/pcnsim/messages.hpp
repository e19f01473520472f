#pragma once

#include <cstdint>

#include "pcnsim/types.hpp"

namespace pcnsim {

enum class TxStatus : std::uint8_t { Pending, Succeeded, Failed };

/// A payment demand. `deadline` is a duration from created_at.
struct Transaction {
    std::uint64_t id = 0;
    NodeId sender = 0;
    NodeId receiver = 0;
    Amount amount = 0;
    Seconds created_at = 0;
    bool has_deadline = false;
    Seconds deadline = 0;
    TxStatus status = TxStatus::Pending;

    /// Absolute expiry given the no-deadline fallback timeout.
    Seconds expires_at(Seconds global_timeout) const {
        return created_at + (has_deadline ? deadline : global_timeout);
    }
};

/// One shard of a split transaction, routed independently on one path.
struct SubTransaction {
    std::uint64_t sub_id = 0;
    std::uint64_t parent_id = 0;
    Amount amount = 0;
    std::uint32_t path_index = 0;
    Seconds time_sent = 0;
    bool marked = false;
    Seconds created_at = 0;
    bool has_deadline = false;
    Seconds deadline = 0;

    /// Remaining time at `now`; infinite for shards without a deadline.
    Seconds remaining(Seconds now) const {
        return has_deadline ? created_at + deadline - now : kNever;
    }
};

/// Confirmation returned to the sender along the reverse path.
struct AckMessage {
    std::uint64_t txTD = 0;  // shard id
    NodeId receiver = 0;
    std::uint32_t pathIndex = 0;
    Seconds timeSent = 0;
    bool isSuccess = false;
    Amount amount = 0;
    bool hasDeadline = false;
    Seconds deadline = 0;
    bool isMarked = false;
    std::uint64_t largerTxID = 0;
};

inline AckMessage make_ack(const SubTransaction& s, NodeId receiver, bool success) {
    AckMessage a;
    a.txTD = s.sub_id;
    a.receiver = receiver;
    a.pathIndex = s.path_index;
    a.timeSent = s.time_sent;
    a.isSuccess = success;
    a.amount = s.amount;
    a.hasDeadline = s.has_deadline;
    a.deadline = s.deadline;
    a.isMarked = s.marked;
    a.largerTxID = s.parent_id;
    return a;
}

}  // namespace pcnsim
