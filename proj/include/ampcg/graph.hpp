#pragma once

// Hybrid graphs (directed + undirected edges over a fixed node set), chain
// graph validation, boundary queries (parents/neighbors/adjacents/
// descendants/connectivity component), and triplex machinery.
//
// Graph values are immutable once built and safe to share across threads.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ampcg {

using NodeId = int;

// A sorted, duplicate-free list of node indices.
using NodeSet = std::vector<NodeId>;

// Bitmask over node indices; graphs are capped at 64 nodes.
using NodeMask = std::uint64_t;

inline constexpr int kMaxNodes = 64;

inline NodeMask mask_of(const NodeSet& xs) {
    NodeMask m = 0;
    for (NodeId v : xs) m |= NodeMask{1} << v;
    return m;
}

inline NodeSet set_of(NodeMask m) {
    NodeSet out;
    for (int v = 0; v < kMaxNodes; ++v)
        if (m >> v & 1) out.push_back(v);
    return out;
}

inline NodeSet sorted_unique(NodeSet xs) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    return xs;
}

// At most one edge, directed or undirected, per unordered node pair.
class HybridGraph {
public:
    HybridGraph() = default;

    explicit HybridGraph(std::vector<std::string> labels) : labels_(std::move(labels)) {
        if (static_cast<int>(labels_.size()) > kMaxNodes)
            throw std::invalid_argument("graph exceeds node limit");
        for (std::size_t i = 0; i < labels_.size(); ++i)
            for (std::size_t j = i + 1; j < labels_.size(); ++j)
                if (labels_[i] == labels_[j])
                    throw std::invalid_argument("duplicate node label: " + labels_[i]);
        link_.assign(labels_.size() * labels_.size(), Link::none);
    }

    // Labels "A", "B", ... (wraps to A1, B1, ... past 26).
    static HybridGraph with_default_labels(int n) {
        std::vector<std::string> labels;
        labels.reserve(n);
        for (int i = 0; i < n; ++i) {
            std::string name(1, static_cast<char>('A' + i % 26));
            if (i >= 26) name += std::to_string(i / 26);
            labels.push_back(std::move(name));
        }
        return HybridGraph(std::move(labels));
    }

    int node_count() const { return static_cast<int>(labels_.size()); }

    const std::string& label(NodeId v) const {
        check_node(v);
        return labels_[v];
    }

    const std::vector<std::string>& labels() const { return labels_; }

    std::optional<NodeId> find_node(std::string_view name) const {
        for (std::size_t i = 0; i < labels_.size(); ++i)
            if (labels_[i] == name) return static_cast<NodeId>(i);
        return std::nullopt;
    }

    // Appends a node; label must be fresh. Returns the new index.
    NodeId add_node(std::string name) {
        if (find_node(name)) throw std::invalid_argument("duplicate node label: " + name);
        if (node_count() == kMaxNodes) throw std::invalid_argument("graph exceeds node limit");
        const int n = node_count();
        std::vector<Link> grown((n + 1) * (n + 1), Link::none);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) grown[u * (n + 1) + v] = link_[u * n + v];
        link_ = std::move(grown);
        labels_.push_back(std::move(name));
        return n;
    }

    void add_directed(NodeId u, NodeId v) { add_edge(u, v, Link::out); }
    void add_undirected(NodeId u, NodeId v) { add_edge(u, v, Link::line); }

    bool has_directed(NodeId u, NodeId v) const { return link(u, v) == Link::out; }
    bool has_undirected(NodeId u, NodeId v) const { return link(u, v) == Link::line; }
    bool adjacent(NodeId u, NodeId v) const { return link(u, v) != Link::none; }

    int edge_count() const {
        int c = 0;
        for (int u = 0; u < node_count(); ++u)
            for (int v = u + 1; v < node_count(); ++v)
                if (adjacent(u, v)) ++c;
        return c;
    }

    std::vector<std::pair<NodeId, NodeId>> directed_edges() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (int u = 0; u < node_count(); ++u)
            for (int v = 0; v < node_count(); ++v)
                if (has_directed(u, v)) out.emplace_back(u, v);
        return out;
    }

    std::vector<std::pair<NodeId, NodeId>> undirected_edges() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        for (int u = 0; u < node_count(); ++u)
            for (int v = u + 1; v < node_count(); ++v)
                if (has_undirected(u, v)) out.emplace_back(u, v);
        return out;
    }

    bool operator==(const HybridGraph&) const = default;

private:
    enum class Link : std::uint8_t { none = 0, out, in, line };

    void check_node(NodeId v) const {
        if (v < 0 || v >= node_count()) throw std::invalid_argument("node index out of range");
    }

    Link link(NodeId u, NodeId v) const {
        check_node(u);
        check_node(v);
        return link_[u * node_count() + v];
    }

    void add_edge(NodeId u, NodeId v, Link kind) {
        check_node(u);
        check_node(v);
        if (u == v) throw std::invalid_argument("self-loop on " + labels_[u]);
        if (adjacent(u, v))
            throw std::invalid_argument("duplicate edge on pair " + labels_[u] + "," + labels_[v]);
        const int n = node_count();
        link_[u * n + v] = kind;
        link_[v * n + u] = kind == Link::line ? Link::line : Link::in;
    }

    std::vector<std::string> labels_;
    std::vector<Link> link_;
};

namespace detail {

inline NodeMask validated_mask(const HybridGraph& g, const NodeSet& xs) {
    NodeMask m = 0;
    for (NodeId v : xs) {
        if (v < 0 || v >= g.node_count()) throw std::invalid_argument("node index out of range");
        m |= NodeMask{1} << v;
    }
    return m;
}

} // namespace detail

// pa(X): nodes u outside X with u -> v for some v in X.
inline NodeSet parents(const HybridGraph& g, const NodeSet& xs) {
    const NodeMask in = detail::validated_mask(g, xs);
    NodeSet out;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (in >> u & 1) continue;
        for (NodeId v : xs)
            if (g.has_directed(u, v)) {
                out.push_back(u);
                break;
            }
    }
    return out;
}

// ne(X): nodes u outside X with u -- v for some v in X.
inline NodeSet neighbors(const HybridGraph& g, const NodeSet& xs) {
    const NodeMask in = detail::validated_mask(g, xs);
    NodeSet out;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (in >> u & 1) continue;
        for (NodeId v : xs)
            if (g.has_undirected(u, v)) {
                out.push_back(u);
                break;
            }
    }
    return out;
}

// ad(X): nodes u outside X adjacent (either edge kind) to some v in X.
inline NodeSet adjacents(const HybridGraph& g, const NodeSet& xs) {
    const NodeMask in = detail::validated_mask(g, xs);
    NodeSet out;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (in >> u & 1) continue;
        for (NodeId v : xs)
            if (g.adjacent(u, v)) {
                out.push_back(u);
                break;
            }
    }
    return out;
}

// de(X): nodes outside X reachable from X by a descending route
// (every step u -> v or u -- v).
inline NodeSet descendants(const HybridGraph& g, const NodeSet& xs) {
    const NodeMask start = detail::validated_mask(g, xs);
    NodeMask reached = start;
    std::queue<NodeId> q;
    for (NodeId v : xs) q.push(v);
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (NodeId v = 0; v < g.node_count(); ++v) {
            if (reached >> v & 1) continue;
            if (g.has_directed(u, v) || g.has_undirected(u, v)) {
                reached |= NodeMask{1} << v;
                q.push(v);
            }
        }
    }
    return set_of(reached & ~start);
}

// co(A): undirected-connectivity component of a single node, including the
// node itself. Defined on any hybrid graph; chain graph validation is
// separate so learner intermediates can use it too.
inline NodeSet connectivity_component(const HybridGraph& g, NodeId a) {
    detail::validated_mask(g, {a});
    NodeMask reached = NodeMask{1} << a;
    std::queue<NodeId> q;
    q.push(a);
    while (!q.empty()) {
        const NodeId u = q.front();
        q.pop();
        for (NodeId v = 0; v < g.node_count(); ++v) {
            if (reached >> v & 1) continue;
            if (g.has_undirected(u, v)) {
                reached |= NodeMask{1} << v;
                q.push(v);
            }
        }
    }
    return set_of(reached);
}

enum class BoundaryKind { parents, neighbors, adjacents, descendants, component };

inline NodeSet boundary(const HybridGraph& g, const NodeSet& xs, BoundaryKind kind) {
    switch (kind) {
    case BoundaryKind::parents: return parents(g, xs);
    case BoundaryKind::neighbors: return neighbors(g, xs);
    case BoundaryKind::adjacents: return adjacents(g, xs);
    case BoundaryKind::descendants: return descendants(g, xs);
    case BoundaryKind::component:
        if (xs.size() != 1)
            throw std::invalid_argument("connectivity component takes a single node");
        return connectivity_component(g, xs.front());
    }
    throw std::invalid_argument("unknown boundary kind");
}

// True iff no descending cycle contains a directed edge. Checked on the
// quotient: contract undirected components, then the directed quotient
// must be loop-free and acyclic.
inline bool is_chain_graph(const HybridGraph& g) {
    const int n = g.node_count();
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (comp[v] != -1) continue;
        for (NodeId w : connectivity_component(g, v)) comp[w] = ncomp;
        ++ncomp;
    }
    std::vector<NodeMask> arcs(ncomp, 0);
    for (auto [u, v] : g.directed_edges()) {
        if (comp[u] == comp[v]) return false; // arrow inside an undirected component
        arcs[comp[u]] |= NodeMask{1} << comp[v];
    }
    // Kahn's algorithm on the quotient.
    std::vector<int> indeg(ncomp, 0);
    for (int c = 0; c < ncomp; ++c)
        for (int d = 0; d < ncomp; ++d)
            if (arcs[c] >> d & 1) ++indeg[d];
    std::queue<int> ready;
    for (int c = 0; c < ncomp; ++c)
        if (indeg[c] == 0) ready.push(c);
    int done = 0;
    while (!ready.empty()) {
        const int c = ready.front();
        ready.pop();
        ++done;
        for (int d = 0; d < ncomp; ++d)
            if (arcs[c] >> d & 1 && --indeg[d] == 0) ready.push(d);
    }
    return done == ncomp;
}

// Node set X with all and only the G-edges whose both ends lie in X.
// Node order (and labels) follow the original index order.
inline HybridGraph induced_subgraph(const HybridGraph& g, const NodeSet& xs) {
    detail::validated_mask(g, xs);
    const NodeSet nodes = sorted_unique(xs);
    std::vector<std::string> labels;
    labels.reserve(nodes.size());
    for (NodeId v : nodes) labels.push_back(g.label(v));
    HybridGraph sub(std::move(labels));
    for (std::size_t i = 0; i < nodes.size(); ++i)
        for (std::size_t j = i + 1; j < nodes.size(); ++j) {
            if (g.has_undirected(nodes[i], nodes[j])) sub.add_undirected(i, j);
            else if (g.has_directed(nodes[i], nodes[j])) sub.add_directed(i, j);
            else if (g.has_directed(nodes[j], nodes[i])) sub.add_directed(j, i);
        }
    return sub;
}

// Triplex ({low,high}, center): outer pair non-adjacent, induced subgraph
// one of low->center<-high, low->center--high, low--center<-high.
// Identity is the pair plus the center; the shape is queried separately.
struct Triplex {
    NodeId low = 0;
    NodeId high = 0;
    NodeId center = 0;

    friend auto operator<=>(const Triplex&, const Triplex&) = default;
};

enum class TriplexKind { immorality, flag };

inline std::vector<Triplex> triplexes(const HybridGraph& g) {
    std::vector<Triplex> out;
    const int n = g.node_count();
    for (NodeId b = 0; b < n; ++b)
        for (NodeId a = 0; a < n; ++a) {
            if (a == b) continue;
            const bool a_in = g.has_directed(a, b) || g.has_undirected(a, b);
            if (!a_in) continue;
            for (NodeId c = a + 1; c < n; ++c) {
                if (c == b || g.adjacent(a, c)) continue;
                const bool c_in = g.has_directed(c, b) || g.has_undirected(c, b);
                if (!c_in) continue;
                if (g.has_directed(a, b) || g.has_directed(c, b))
                    out.push_back({a, c, b});
            }
        }
    std::sort(out.begin(), out.end());
    return out;
}

inline TriplexKind triplex_kind(const HybridGraph& g, const Triplex& t) {
    const bool two_arrows = g.has_directed(t.low, t.center) && g.has_directed(t.high, t.center);
    return two_arrows ? TriplexKind::immorality : TriplexKind::flag;
}

// Same adjacencies and same triplexes. Nodes are matched by label, so the
// two graphs may index their nodes differently.
inline bool triplex_equivalent(const HybridGraph& a, const HybridGraph& b) {
    if (a.node_count() != b.node_count())
        throw std::invalid_argument("triplex equivalence needs a common node set");
    const int n = a.node_count();
    std::vector<NodeId> to_a(n);
    for (NodeId v = 0; v < n; ++v) {
        const auto m = a.find_node(b.label(v));
        if (!m) throw std::invalid_argument("triplex equivalence needs a common node set");
        to_a[v] = *m;
    }
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v)
            if (b.adjacent(u, v) != a.adjacent(to_a[u], to_a[v])) return false;
    auto remapped = triplexes(b);
    for (Triplex& t : remapped) {
        t = {std::min(to_a[t.low], to_a[t.high]), std::max(to_a[t.low], to_a[t.high]),
             to_a[t.center]};
    }
    std::sort(remapped.begin(), remapped.end());
    return remapped == triplexes(a);
}

// A hybrid graph certified to contain no semidirected cycle.
class ChainGraph {
public:
    explicit ChainGraph(HybridGraph g) : g_(std::move(g)) {
        if (!is_chain_graph(g_))
            throw std::invalid_argument("graph has a semidirected cycle");
    }

    const HybridGraph& graph() const { return g_; }
    int node_count() const { return g_.node_count(); }

    bool operator==(const ChainGraph&) const = default;

private:
    HybridGraph g_;
};

} // namespace ampcg
