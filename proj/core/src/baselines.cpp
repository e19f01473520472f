#include "pcnsim/baselines.hpp"

#include <algorithm>

namespace pcnsim {

std::vector<SubTransaction> spider_split(const Transaction& tx, Amount mtu,
                                         std::uint64_t first_sub_id) {
    return split_transaction(tx, mtu, first_sub_id);
}

void spider_window_adjust(PathState& ps, const AckMessage& ack, const SpiderParams& p) {
    if (ack.isMarked)
        ps.window = std::max(p.w_min, ps.window * (1 - 1 / p.g));
    else
        ps.window = std::min(ps.window_cap, ps.window + p.beta);
}

std::strong_ordering spider_queue_order(const FifoStamp& a, const FifoStamp& b) {
    if (a.arrival < b.arrival) return std::strong_ordering::less;
    if (b.arrival < a.arrival) return std::strong_ordering::greater;
    return a.seq <=> b.seq;
}

std::optional<std::uint32_t> waterfilling_pick(std::span<const Amount> available, Amount amount) {
    if (available.empty()) return std::nullopt;
    std::uint32_t best = 0;
    for (std::uint32_t i = 1; i < available.size(); ++i)
        if (available[i] > available[best]) best = i;
    if (available[best] < amount) return std::nullopt;
    return best;
}

}  // namespace pcnsim
