#pragma once

// Separation X ⊥ Y | Z via Z-open-route reachability.
//
// A route is a node sequence (repeats allowed) whose consecutive pairs are
// adjacent. An interior occurrence of a node B is head-no-tail when its two
// incident route-edge ends at B form A -> B <- C, A -> B -- C or A -- B <- C
// (possibly A = C, reusing one edge). A route is Z-open when every
// head-no-tail occurrence is at a node in Z and every other occurrence is at
// a node outside Z; endpoints carry a single edge end and are never
// head-no-tail. X ⊥ Y | Z holds iff no Z-open route joins X and Y.
//
// Everything here is a pure function over an immutable graph; queries can
// fan out across threads freely.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ampcg/graph.hpp"

namespace ampcg {

// How a route edge meets a node: arrow into it, undirected, or arrow out.
enum class EndKind : std::uint8_t { head, line, tail };

struct SeparationQuery {
    NodeSet x, y, z;
};

namespace detail {

inline void validate_query_masks(NodeMask x, NodeMask y, NodeMask z) {
    if (!x || !y) throw std::invalid_argument("separation query needs nonempty X and Y");
    if ((x & y) || (x & z) || (y & z))
        throw std::invalid_argument("separation query sets must be disjoint");
}

// End kind at `at` of the edge joining `at` and `other`.
inline EndKind end_at(const HybridGraph& g, NodeId at, NodeId other) {
    if (g.has_undirected(at, other)) return EndKind::line;
    return g.has_directed(other, at) ? EndKind::head : EndKind::tail;
}

inline bool head_no_tail(EndKind a, EndKind b) {
    return (a == EndKind::head || b == EndKind::head) && a != EndKind::tail && b != EndKind::tail;
}

inline int state_index(NodeId v, EndKind k) { return v * 3 + static_cast<int>(k); }

} // namespace detail

// Reachability over states (node, entry end). Routes may repeat nodes and
// edges, so plain path search would be wrong; visiting each state once is
// exact because a Z-open route that revisits a state can be shortened by
// excising the segment between the visits.
inline bool separated_masks(const HybridGraph& g, NodeMask xs, NodeMask ys, NodeMask zs) {
    detail::validate_query_masks(xs, ys, zs);
    const int n = g.node_count();
    std::vector<bool> seen(3 * n, false);
    std::vector<std::pair<NodeId, EndKind>> stack;

    // Returns true when Y is hit; otherwise schedules the new state.
    auto arrive = [&](NodeId w, EndKind entry) {
        if (ys >> w & 1) return true;
        const int s = detail::state_index(w, entry);
        if (!seen[s]) {
            seen[s] = true;
            stack.emplace_back(w, entry);
        }
        return false;
    };

    for (NodeId x = 0; x < n; ++x) {
        if (!(xs >> x & 1)) continue;
        for (NodeId w = 0; w < n; ++w) {
            if (!g.adjacent(x, w)) continue;
            if (arrive(w, detail::end_at(g, w, x))) return false;
        }
    }
    while (!stack.empty()) {
        const auto [v, entry] = stack.back();
        stack.pop_back();
        const bool v_in_z = zs >> v & 1;
        for (NodeId w = 0; w < n; ++w) {
            if (!g.adjacent(v, w)) continue;
            const EndKind exit = detail::end_at(g, v, w);
            if (detail::head_no_tail(entry, exit) != v_in_z) continue;
            if (arrive(w, detail::end_at(g, w, v))) return false;
        }
    }
    return true;
}

inline bool separated(const HybridGraph& g, const SeparationQuery& q) {
    return separated_masks(g, detail::validated_mask(g, q.x), detail::validated_mask(g, q.y),
                           detail::validated_mask(g, q.z));
}

inline bool separated(const HybridGraph& g, const NodeSet& x, const NodeSet& y,
                      const NodeSet& z) {
    return separated(g, SeparationQuery{x, y, z});
}

// Anti-regression oracle: backtracking enumeration of routes, checking the
// Z-openness conditions occurrence by occurrence, straight from the
// definition. Only routes that never revisit a (node, entry end) state are
// explored: between two visits to the same state the route can be excised
// and the remainder still satisfies the per-occurrence conditions, so a
// shortest Z-open route never repeats a state. That also bounds any needed
// route by 3|V| visited states plus the start, i.e. 3|V|+1 node slots,
// enforced below as an explicit cap.
inline bool separated_bruteforce_masks(const HybridGraph& g, NodeMask xs, NodeMask ys,
                                       NodeMask zs) {
    detail::validate_query_masks(xs, ys, zs);
    const int n = g.node_count();
    if (n > 8) throw std::invalid_argument("brute-force separation is guarded at 8 nodes");
    const int max_slots = 3 * n + 1;
    std::vector<bool> on_route(3 * n, false);

    // v was entered with `entry`; slots counts nodes of the route so far.
    auto dfs = [&](auto&& self, NodeId v, EndKind entry, int slots) -> bool {
        if (slots + 1 > max_slots) return false;
        for (NodeId w = 0; w < n; ++w) {
            if (!g.adjacent(v, w)) continue;
            // Occurrence check at v (interior): the two edge ends at v must
            // form a head-no-tail shape iff v is in Z.
            const EndKind exit = detail::end_at(g, v, w);
            const bool hnt = (entry == EndKind::head || exit == EndKind::head) &&
                             entry != EndKind::tail && exit != EndKind::tail;
            if (hnt != static_cast<bool>(zs >> v & 1)) continue;
            if (ys >> w & 1) return true; // Z-open route reached Y
            const int s = detail::state_index(w, detail::end_at(g, w, v));
            if (on_route[s]) continue;
            on_route[s] = true;
            const bool found = self(self, w, detail::end_at(g, w, v), slots + 1);
            on_route[s] = false;
            if (found) return true;
        }
        return false;
    };

    for (NodeId x = 0; x < n; ++x) {
        if (!(xs >> x & 1)) continue;
        for (NodeId w = 0; w < n; ++w) {
            if (!g.adjacent(x, w)) continue;
            if (ys >> w & 1) return false; // single-edge route, no interior occurrence
            const EndKind entry = detail::end_at(g, w, x);
            const int s = detail::state_index(w, entry);
            on_route[s] = true;
            const bool found = dfs(dfs, w, entry, 2);
            on_route[s] = false;
            if (found) return false;
        }
    }
    return true;
}

inline bool separated_bruteforce(const HybridGraph& g, const SeparationQuery& q) {
    return separated_bruteforce_masks(g, detail::validated_mask(g, q.x),
                                      detail::validated_mask(g, q.y),
                                      detail::validated_mask(g, q.z));
}

inline bool separated_bruteforce(const HybridGraph& g, const NodeSet& x, const NodeSet& y,
                                 const NodeSet& z) {
    return separated_bruteforce(g, SeparationQuery{x, y, z});
}

// One separation statement, canonicalized so that x is the
// lexicographically smaller of the two sides.
struct IndependenceStatement {
    NodeMask x = 0;
    NodeMask y = 0;
    NodeMask z = 0;

    friend auto operator<=>(const IndependenceStatement&, const IndependenceStatement&) = default;
};

inline IndependenceStatement canonical_statement(NodeMask x, NodeMask y, NodeMask z) {
    if (y < x) std::swap(x, y);
    return {x, y, z};
}

// Every X ⊥ Y | Z of the graph over disjoint nonempty X, Y and
// Z ⊆ V \ (X ∪ Y), one entry per unordered {X,Y} pair, sorted.
inline std::vector<IndependenceStatement> independence_model(const HybridGraph& g) {
    const int n = g.node_count();
    if (n > 7) throw std::invalid_argument("independence model enumeration is guarded at 7 nodes");
    std::vector<IndependenceStatement> out;
    // Each node takes one of four roles: in X, in Y, in Z, or out.
    std::vector<int> role(n, 0);
    for (;;) {
        NodeMask x = 0, y = 0, z = 0;
        for (int v = 0; v < n; ++v) {
            if (role[v] == 1) x |= NodeMask{1} << v;
            else if (role[v] == 2) y |= NodeMask{1} << v;
            else if (role[v] == 3) z |= NodeMask{1} << v;
        }
        if (x && y && x < y && separated_masks(g, x, y, z)) out.push_back({x, y, z});
        int i = 0;
        while (i < n && role[i] == 3) role[i++] = 0;
        if (i == n) break;
        ++role[i];
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace ampcg
