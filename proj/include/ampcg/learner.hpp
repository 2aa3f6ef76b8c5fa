#pragma once

// Two-phase structure learner. Phase 1 (adjacency search) starts from the
// complete undirected graph and removes an edge A - B once some candidate
// set S of the current size l separates A from B, recording S as the
// separator of the pair. Phase 2 marks edge ends with blocks via the rules
// R1-R4 to a fixpoint and then directs every edge with exactly one blocked
// end away from the block.
//
// With an oracle faithful to a chain graph G, the output is a chain graph
// triplex equivalent to G. A non-faithful oracle (e.g. a statistical one)
// may produce a graph with semidirected cycles; learn() flags that instead
// of failing.

#include <cassert>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ampcg/graph.hpp"
#include "ampcg/oracle.hpp"

namespace ampcg {

// A blocked end means the edge may not be directed into that endpoint.
// Marks only ever move circle -> block.
enum class EndMark : std::uint8_t { none = 0, circle, block };

// Skeleton whose edge ends carry marks. The mark at the a-side of edge
// {a,b} is addressed as end_mark(a, b).
class MarkedGraph {
public:
    explicit MarkedGraph(std::vector<std::string> labels)
        : labels_(std::move(labels)), marks_(labels_.size() * labels_.size(), EndMark::none) {}

    static MarkedGraph complete(std::vector<std::string> labels) {
        MarkedGraph g(std::move(labels));
        for (int u = 0; u < g.node_count(); ++u)
            for (int v = u + 1; v < g.node_count(); ++v) g.add_edge(u, v);
        return g;
    }

    int node_count() const { return static_cast<int>(labels_.size()); }
    const std::vector<std::string>& labels() const { return labels_; }

    bool has_edge(NodeId a, NodeId b) const { return mark(a, b) != EndMark::none; }
    EndMark end_mark(NodeId a, NodeId b) const { return mark(a, b); }
    bool blocked_at(NodeId a, NodeId b) const { return mark(a, b) == EndMark::block; }

    void add_edge(NodeId a, NodeId b) {
        check_pair(a, b);
        if (has_edge(a, b)) throw std::invalid_argument("duplicate skeleton edge");
        set(a, b, EndMark::circle);
        set(b, a, EndMark::circle);
    }

    void remove_edge(NodeId a, NodeId b) {
        check_pair(a, b);
        set(a, b, EndMark::none);
        set(b, a, EndMark::none);
    }

    // Places a block at the a-side of {a,b}; idempotent.
    void set_block(NodeId a, NodeId b) {
        check_pair(a, b);
        if (!has_edge(a, b)) throw std::invalid_argument("no such skeleton edge");
        set(a, b, EndMark::block);
    }

    NodeSet adjacents(NodeId a) const {
        NodeSet out;
        for (NodeId v = 0; v < node_count(); ++v)
            if (v != a && has_edge(a, v)) out.push_back(v);
        return out;
    }

    int edge_count() const {
        int c = 0;
        for (int u = 0; u < node_count(); ++u)
            for (int v = u + 1; v < node_count(); ++v)
                if (has_edge(u, v)) ++c;
        return c;
    }

    bool operator==(const MarkedGraph&) const = default;

private:
    void check_pair(NodeId a, NodeId b) const {
        if (a < 0 || b < 0 || a >= node_count() || b >= node_count() || a == b)
            throw std::invalid_argument("bad node pair");
    }
    EndMark mark(NodeId a, NodeId b) const {
        check_pair(a, b);
        return marks_[a * node_count() + b];
    }
    void set(NodeId a, NodeId b, EndMark m) { marks_[a * node_count() + b] = m; }

    std::vector<std::string> labels_;
    std::vector<EndMark> marks_;
};

// Separator table: for each non-adjacent pair, the set that separated it
// during the adjacency phase.
class SeparatorMap {
public:
    bool contains(NodeId a, NodeId b) const { return map_.count(key(a, b)) > 0; }

    const NodeSet& at(NodeId a, NodeId b) const {
        const auto it = map_.find(key(a, b));
        if (it == map_.end()) throw std::invalid_argument("no separator recorded for pair");
        return it->second;
    }

    void set(NodeId a, NodeId b, NodeSet s) { map_[key(a, b)] = sorted_unique(std::move(s)); }

    bool separator_has(NodeId a, NodeId b, NodeId v) const {
        const NodeSet& s = at(a, b);
        return std::binary_search(s.begin(), s.end(), v);
    }

    std::size_t size() const { return map_.size(); }

    bool operator==(const SeparatorMap&) const = default;

private:
    static std::pair<NodeId, NodeId> key(NodeId a, NodeId b) {
        return {std::min(a, b), std::max(a, b)};
    }
    std::map<std::pair<NodeId, NodeId>, NodeSet> map_;
};

namespace detail {

// Separator candidates for the ordered pair (a,b):
// [ad_H(a) ∪ ad_H(ad_H(a))] \ {a,b}. The literal union always contains `a`
// itself (a is adjacent to its adjacents); it is excluded so the oracle
// query stays well-formed, which is also all the adjacency-correctness
// argument needs.
inline NodeSet skeleton_candidates(const MarkedGraph& h, NodeId a, NodeId b) {
    const NodeSet ad1 = h.adjacents(a);
    const NodeMask m1 = mask_of(ad1);
    NodeMask cand = m1;
    for (NodeId u : ad1)
        for (NodeId v = 0; v < h.node_count(); ++v)
            if (v != u && h.has_edge(u, v) && !(m1 >> v & 1)) cand |= NodeMask{1} << v;
    cand &= ~(NodeMask{1} << a);
    cand &= ~(NodeMask{1} << b);
    return set_of(cand);
}

// Visits the size-k subsets of `pool` in lexicographic order until `fn`
// returns true; returns the accepted subset.
template <typename Fn>
inline std::optional<NodeSet> first_subset(const NodeSet& pool, int k, Fn&& fn) {
    const int n = static_cast<int>(pool.size());
    if (k > n) return std::nullopt;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        NodeSet s;
        s.reserve(k);
        for (int i : idx) s.push_back(pool[i]);
        if (fn(s)) return s;
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) return std::nullopt;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

} // namespace detail

struct SkeletonResult {
    MarkedGraph skeleton;
    SeparatorMap separators;
};

// Adjacency phase. Ordered pairs are scanned in lexicographic index order;
// within one separator size l, passes repeat until no edge is removed, and
// candidate sets are recomputed from the current skeleton after every
// removal. The first separating subset (lexicographic order) wins.
inline SkeletonResult learn_skeleton(const IndependenceOracle& oracle,
                                     std::vector<std::string> labels) {
    MarkedGraph h = MarkedGraph::complete(std::move(labels));
    SeparatorMap seps;
    const int n = h.node_count();
    int l = 0;
    for (;;) {
        bool removed = true;
        while (removed) {
            removed = false;
            for (NodeId a = 0; a < n; ++a) {
                for (NodeId b = 0; b < n; ++b) {
                    if (a == b || !h.has_edge(a, b)) continue;
                    const NodeSet cand = detail::skeleton_candidates(h, a, b);
                    if (static_cast<int>(cand.size()) < l) continue;
                    const auto s = detail::first_subset(cand, l, [&](const NodeSet& sub) {
                        return oracle.query({a}, {b}, sub);
                    });
                    if (!s) continue;
                    assert(static_cast<int>(s->size()) == l);
                    assert(std::includes(cand.begin(), cand.end(), s->begin(), s->end()));
                    seps.set(a, b, *s);
                    h.remove_edge(a, b);
                    removed = true;
                }
            }
        }
        ++l;
        bool possible = false;
        for (NodeId a = 0; a < n && !possible; ++a)
            for (NodeId b = 0; b < n && !possible; ++b)
                if (a != b && h.has_edge(a, b) &&
                    static_cast<int>(detail::skeleton_candidates(h, a, b).size()) >= l)
                    possible = true;
        if (!possible) break;
    }
    return {std::move(h), std::move(seps)};
}

// A single block placement: rule 1-4 put a block at the `end` side of the
// skeleton edge {end, other}.
struct BlockEvent {
    int rule = 0;
    NodeId end = 0;
    NodeId other = 0;

    friend auto operator<=>(const BlockEvent&, const BlockEvent&) = default;
};

namespace detail {

// True iff some simple blocked chain a = v1 ⊣-∘ v2 ⊣-∘ ... ⊣-∘ b of at
// least two edges exists, i.e. b is reachable from some blocked-end
// successor of a without passing through a again. The 1-edge chain (the
// edge {a,b} itself) never justifies its own block.
inline bool blocked_chain_exists(const MarkedGraph& h, NodeId a, NodeId b) {
    const int n = h.node_count();
    for (NodeId v = 0; v < n; ++v) {
        if (v == a || v == b || !h.has_edge(a, v) || !h.blocked_at(a, v)) continue;
        std::vector<bool> seen(n, false);
        seen[a] = true; // simple paths only; the chain may not revisit a
        std::vector<NodeId> stack{v};
        seen[v] = true;
        while (!stack.empty()) {
            const NodeId u = stack.back();
            stack.pop_back();
            for (NodeId w = 0; w < n; ++w) {
                if (seen[w] || !h.has_edge(u, w) || !h.blocked_at(u, w)) continue;
                if (w == b) return true;
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return false;
}

} // namespace detail

// All block placements currently justified by one of the rules and not yet
// present. Circled ends in the rule pictures are wildcards, so only the
// conditions drawn as blocks or as (non-)adjacencies are tested; R1, R2 and
// R4 are induced-subgraph conditions.
inline std::vector<BlockEvent> pending_rule_firings(const MarkedGraph& h,
                                                    const SeparatorMap& seps) {
    std::vector<BlockEvent> out;
    const int n = h.node_count();
    auto propose = [&](int rule, NodeId end, NodeId other) {
        if (!h.blocked_at(end, other)) out.push_back({rule, end, other});
    };

    // R1: a ∘-∘ b ∘-∘ c, a and c non-adjacent, b ∉ S_ac
    //  => block the a-end of {a,b} and the c-end of {c,b}.
    for (NodeId b = 0; b < n; ++b)
        for (NodeId a = 0; a < n; ++a) {
            if (a == b || !h.has_edge(a, b)) continue;
            for (NodeId c = a + 1; c < n; ++c) {
                if (c == b || !h.has_edge(c, b) || h.has_edge(a, c)) continue;
                if (!seps.contains(a, c) || seps.separator_has(a, c, b)) continue;
                propose(1, a, b);
                propose(1, c, b);
            }
        }

    // R2: a ⊣-∘ b ∘-∘ c, a and c non-adjacent, b ∈ S_ac
    //  => block the b-end of {b,c}.
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = 0; b < n; ++b) {
            if (a == b || !h.has_edge(a, b) || !h.blocked_at(a, b)) continue;
            for (NodeId c = 0; c < n; ++c) {
                if (c == a || c == b || !h.has_edge(b, c) || h.has_edge(a, c)) continue;
                if (!seps.contains(a, c) || !seps.separator_has(a, c, b)) continue;
                propose(2, b, c);
            }
        }

    // R3: a simple chain a ⊣-∘ ... ⊣-∘ b of length >= 2 plus the closing
    // skeleton edge {a,b} => block the a-end of {a,b}.
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = 0; b < n; ++b) {
            if (a == b || !h.has_edge(a, b) || h.blocked_at(a, b)) continue;
            if (detail::blocked_chain_exists(h, a, b)) propose(3, a, b);
        }

    // R4: edges {a,b}, {a,c}, {a,d}, c ⊣-∘ b, d ⊣-∘ b, c and d non-adjacent,
    // a ∈ S_cd, b ∉ S_cd => block the a-end of {a,b}.
    for (NodeId a = 0; a < n; ++a)
        for (NodeId b = 0; b < n; ++b) {
            if (a == b || !h.has_edge(a, b)) continue;
            for (NodeId c = 0; c < n; ++c) {
                if (c == a || c == b || !h.has_edge(a, c)) continue;
                if (!h.has_edge(c, b) || !h.blocked_at(c, b)) continue;
                for (NodeId d = c + 1; d < n; ++d) {
                    if (d == a || d == b || !h.has_edge(a, d)) continue;
                    if (!h.has_edge(d, b) || !h.blocked_at(d, b)) continue;
                    if (h.has_edge(c, d)) continue;
                    if (!seps.contains(c, d)) continue;
                    if (!seps.separator_has(c, d, a) || seps.separator_has(c, d, b)) continue;
                    propose(4, a, b);
                }
            }
        }

    return out;
}

// Closes the marks under R1-R4. The rules are monotone in blocks (adding a
// block never disables an antecedent), so the fixpoint is unique and any
// application order reaches it; sweeps run R1..R4 in order until stable.
inline MarkedGraph apply_rules(MarkedGraph h, const SeparatorMap& seps,
                               std::vector<BlockEvent>* trace = nullptr) {
    for (;;) {
        const auto firings = pending_rule_firings(h, seps);
        if (firings.empty()) break;
        for (const BlockEvent& f : firings) {
            if (h.blocked_at(f.end, f.other)) continue;
            h.set_block(f.end, f.other);
            if (trace) trace->push_back(f);
        }
    }
    return h;
}

// Final orientation: an edge blocked at exactly one end is directed away
// from the block; blocked at both ends or at neither, it stays undirected.
inline HybridGraph orient(const MarkedGraph& h) {
    HybridGraph g(h.labels());
    for (NodeId a = 0; a < h.node_count(); ++a)
        for (NodeId b = a + 1; b < h.node_count(); ++b) {
            if (!h.has_edge(a, b)) continue;
            const bool ba = h.blocked_at(a, b);
            const bool bb = h.blocked_at(b, a);
            if (ba && !bb) g.add_directed(a, b);
            else if (bb && !ba) g.add_directed(b, a);
            else g.add_undirected(a, b);
        }
    return g;
}

struct LearnResult {
    HybridGraph graph;
    bool is_valid_chain_graph = false;
    MarkedGraph marked;
    SeparatorMap separators;
    std::vector<BlockEvent> blocks; // placement order, with the rule that fired
};

inline LearnResult learn(const IndependenceOracle& oracle, std::vector<std::string> labels) {
    auto [skeleton, seps] = learn_skeleton(oracle, std::move(labels));
    std::vector<BlockEvent> trace;
    MarkedGraph fixed = apply_rules(std::move(skeleton), seps, &trace);
    HybridGraph out = orient(fixed);
    const bool valid = is_chain_graph(out);
    return {std::move(out), valid, std::move(fixed), std::move(seps), std::move(trace)};
}

} // namespace ampcg
