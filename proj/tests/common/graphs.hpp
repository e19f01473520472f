#pragma once

#include <algorithm>
#include <functional>
#include <limits>
#include <vector>

#include "pcnsim/topology.hpp"

namespace pcnsim::testing {

/// Builds a graph from (u, v, capacity) triples with even balances.
inline Graph make_graph(std::size_t nodes,
                        const std::vector<std::tuple<NodeId, NodeId, Amount>>& edges,
                        double delay_ms = 30.0) {
    Graph g;
    g.nodes = nodes;
    for (auto [u, v, cap] : edges) {
        Channel ch;
        ch.u = std::min(u, v);
        ch.v = std::max(u, v);
        ch.capacity = cap;
        ch.balance[0] = cap - cap / 2;
        ch.balance[1] = cap / 2;
        ch.delay_ms = delay_ms;
        g.channels.push_back(ch);
    }
    g.rebuild_adjacency();
    return g;
}

struct SimplePath {
    std::vector<std::uint32_t> channels;
    Amount bottleneck = 0;
};

/// Every simple src->dst path over channels not in `banned`, by exhaustive DFS.
inline std::vector<SimplePath> all_simple_paths(const Graph& g, NodeId src, NodeId dst,
                                                const std::vector<bool>& banned) {
    std::vector<SimplePath> out;
    std::vector<bool> seen(g.nodes, false);
    std::vector<std::uint32_t> stack;
    std::function<void(NodeId, Amount)> dfs = [&](NodeId n, Amount bn) {
        if (n == dst) {
            out.push_back({stack, bn});
            return;
        }
        seen[n] = true;
        for (auto ci : g.adjacency[n]) {
            if (banned[ci]) continue;
            const auto& ch = g.channels[ci];
            NodeId m = ch.u == n ? ch.v : ch.u;
            if (seen[m]) continue;
            stack.push_back(ci);
            dfs(m, std::min(bn, ch.capacity));
            stack.pop_back();
        }
        seen[n] = false;
    };
    dfs(src, std::numeric_limits<Amount>::max());
    return out;
}

}  // namespace pcnsim::testing
