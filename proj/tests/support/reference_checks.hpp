#pragma once

// Independent reference implementations used only as test oracles. Each is
// written from the relevant definition with a different algorithm family
// than the library code it cross-checks.

#include <functional>
#include <vector>

#include "ampcg/graph.hpp"

namespace ampcg::testing {

// Semidirected-cycle detector by direct enumeration of simple descending
// cycles (each step u -> v or u -- v, at least one arrow). Any semidirected
// cycle contains a simple one: take a directed edge u -> v on it and a
// shortest descending path back from v to u. Cross-checks is_chain_graph.
inline bool has_semidirected_cycle_bruteforce(const HybridGraph& g) {
    const int n = g.node_count();
    std::vector<bool> on_path(n, false);

    std::function<bool(NodeId, NodeId, bool)> extend =
        [&](NodeId start, NodeId v, bool saw_arrow) {
            for (NodeId w = 0; w < n; ++w) {
                const bool step_arrow = g.has_directed(v, w);
                if (!step_arrow && !g.has_undirected(v, w)) continue;
                if (w == start) {
                    if (saw_arrow || step_arrow) return true;
                    continue;
                }
                if (on_path[w]) continue;
                on_path[w] = true;
                const bool found = extend(start, w, saw_arrow || step_arrow);
                on_path[w] = false;
                if (found) return true;
            }
            return false;
        };

    for (NodeId s = 0; s < n; ++s) {
        on_path[s] = true;
        const bool found = extend(s, s, false);
        on_path[s] = false;
        if (found) return true;
    }
    return false;
}

// Classic d-separation on a DAG via the moralized ancestral graph:
// restrict to ancestors of X ∪ Y ∪ Z, marry parents of a common child,
// drop directions, delete Z, and test undirected connectivity.
inline bool d_separated_moral(const HybridGraph& dag, const NodeSet& x, const NodeSet& y,
                              const NodeSet& z) {
    const int n = dag.node_count();
    const NodeMask xm = mask_of(x), ym = mask_of(y), zm = mask_of(z);

    NodeMask anc = xm | ym | zm;
    for (bool grew = true; grew;) {
        grew = false;
        for (NodeId u = 0; u < n; ++u) {
            if (anc >> u & 1) continue;
            for (NodeId v = 0; v < n; ++v)
                if ((anc >> v & 1) && dag.has_directed(u, v)) {
                    anc |= NodeMask{1} << u;
                    grew = true;
                    break;
                }
        }
    }

    std::vector<std::vector<bool>> moral(n, std::vector<bool>(n, false));
    auto in_anc = [&](NodeId v) { return (anc >> v & 1) != 0; };
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = 0; v < n; ++v)
            if (in_anc(u) && in_anc(v) && dag.has_directed(u, v)) moral[u][v] = moral[v][u] = true;
    for (NodeId child = 0; child < n; ++child) {
        if (!in_anc(child)) continue;
        for (NodeId p = 0; p < n; ++p)
            for (NodeId q = p + 1; q < n; ++q)
                if (in_anc(p) && in_anc(q) && dag.has_directed(p, child) &&
                    dag.has_directed(q, child))
                    moral[p][q] = moral[q][p] = true;
    }

    NodeMask reached = xm;
    std::vector<NodeId> stack(x.begin(), x.end());
    while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v = 0; v < n; ++v) {
            if (!moral[u][v] || (reached >> v & 1)) continue;
            if (zm >> v & 1) continue; // conditioning nodes are deleted
            if (!in_anc(v)) continue;
            if (ym >> v & 1) return false;
            reached |= NodeMask{1} << v;
            stack.push_back(v);
        }
    }
    return true;
}

} // namespace ampcg::testing
