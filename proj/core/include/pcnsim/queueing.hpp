#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <tuple>

#include "pcnsim/messages.hpp"

namespace pcnsim {

/// Sort key for a queued shard. Compared on (rank, primary, secondary, sub_id);
/// `amount` rides along and is not part of the order.
struct QueueEntry {
    int rank = 0;
    double primary = 0;
    std::int64_t secondary = 0;
    std::uint64_t sub_id = 0;
    Amount amount = 0;

    friend bool operator<(const QueueEntry& a, const QueueEntry& b) {
        return std::tie(a.rank, a.primary, a.secondary, a.sub_id) <
               std::tie(b.rank, b.primary, b.secondary, b.sub_id);
    }
};

/// Deadline-aware key: deadline shards before deadline-free ones, then
/// earliest expiry (equivalently, least remaining time), then smaller amount.
inline QueueEntry deadline_entry(const SubTransaction& s) {
    QueueEntry e;
    e.rank = s.has_deadline ? 0 : 1;
    e.primary = s.has_deadline ? s.created_at + s.deadline : 0.0;
    e.secondary = s.amount;
    e.sub_id = s.sub_id;
    e.amount = s.amount;
    return e;
}

/// FIFO key: arrival time, then arrival sequence number.
inline QueueEntry fifo_entry(const SubTransaction& s, Seconds arrival, std::uint64_t seq) {
    QueueEntry e;
    e.primary = arrival;
    e.secondary = static_cast<std::int64_t>(seq);
    e.sub_id = s.sub_id;
    e.amount = s.amount;
    return e;
}

class ShardQueue {
public:
    void push(const QueueEntry& e) { set_.insert(e); }
    bool erase(const QueueEntry& e) { return set_.erase(e) > 0; }
    bool empty() const { return set_.empty(); }
    std::size_t size() const { return set_.size(); }
    const QueueEntry& front() const { return *set_.begin(); }
    QueueEntry pop() {
        auto e = *set_.begin();
        set_.erase(set_.begin());
        return e;
    }
    auto begin() const { return set_.begin(); }
    auto end() const { return set_.end(); }

private:
    std::set<QueueEntry> set_;
};

}  // namespace pcnsim
