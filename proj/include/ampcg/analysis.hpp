#pragma once

// Executable verification: the pairwise Markov conditions of a chain graph,
// Markov-ness of an oracle against a graph's independence model, exhaustive
// chain graph enumeration at desk scale, flag preservation across a triplex
// equivalence class, and the five-node fixture showing that single-edge
// growth of AMP models can fail.

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ampcg/graph.hpp"
#include "ampcg/graph_io.hpp"
#include "ampcg/oracle.hpp"
#include "ampcg/separation.hpp"

namespace ampcg {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string witness; // the violating query or triple when failed
};

struct VerificationReport {
    std::vector<CheckResult> checks;

    void add(std::string name, bool passed, std::string witness = "") {
        checks.push_back({std::move(name), passed, std::move(witness)});
    }

    bool all_passed() const {
        for (const CheckResult& c : checks)
            if (!c.passed) return false;
        return true;
    }

    std::string to_text() const {
        std::ostringstream out;
        for (const CheckResult& c : checks) {
            out << "CHECK " << c.name << ' ' << (c.passed ? "PASS" : "FAIL");
            if (!c.passed && !c.witness.empty()) out << " [witness: " << c.witness << ']';
            out << '\n';
        }
        return out.str();
    }
};

namespace detail {

inline std::string set_names(const HybridGraph& g, const NodeSet& xs) {
    std::string out = "{";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += g.label(xs[i]);
    }
    return out + "}";
}

inline std::string query_text(const HybridGraph& g, const NodeSet& x, const NodeSet& y,
                              const NodeSet& z) {
    return set_names(g, x) + " _||_ " + set_names(g, y) + " | " + set_names(g, z);
}

inline NodeSet set_minus(const NodeSet& a, const NodeSet& b) {
    NodeSet out;
    const NodeMask drop = mask_of(b);
    for (NodeId v : a)
        if (!(drop >> v & 1)) out.push_back(v);
    return out;
}

inline NodeSet set_union(const NodeSet& a, const NodeSet& b) {
    NodeSet out = a;
    out.insert(out.end(), b.begin(), b.end());
    return sorted_unique(std::move(out));
}

} // namespace detail

// A distribution that satisfies intersection and composition is Markovian
// wrt G iff both conditions below hold for every node A:
//   within-component:  A ⊥ co(A)\A\ne(A) | pa(A ∪ ne(A)) ∪ ne(A)
//   nondescendants:    A ⊥ V\A\de(A)\pa(A) | pa(A)
// Empty left-hand sides count as trivially true.
inline VerificationReport check_markov_conditions(const IndependenceOracle& oracle,
                                                  const ChainGraph& cg) {
    const HybridGraph& g = cg.graph();
    VerificationReport report;
    for (NodeId a = 0; a < g.node_count(); ++a) {
        const NodeSet self{a};
        const NodeSet ne = neighbors(g, self);
        {
            const NodeSet y = detail::set_minus(connectivity_component(g, a),
                                                detail::set_union(self, ne));
            const NodeSet z = detail::set_union(parents(g, detail::set_union(self, ne)), ne);
            const bool ok = y.empty() || oracle.query(self, y, z);
            report.add("within-component(" + g.label(a) + ")", ok,
                       ok ? "" : detail::query_text(g, self, y, z));
        }
        {
            NodeSet rest;
            for (NodeId v = 0; v < g.node_count(); ++v)
                if (v != a) rest.push_back(v);
            const NodeSet z = parents(g, self);
            const NodeSet y =
                detail::set_minus(detail::set_minus(rest, descendants(g, self)), z);
            const bool ok = y.empty() || oracle.query(self, y, z);
            report.add("nondescendants(" + g.label(a) + ")", ok,
                       ok ? "" : detail::query_text(g, self, y, z));
        }
    }
    return report;
}

// First statement of independence_model(cg) the oracle denies, if any.
inline std::optional<IndependenceStatement>
find_markov_violation(const IndependenceOracle& oracle, const ChainGraph& cg) {
    if (cg.node_count() > 6)
        throw std::invalid_argument("markov check is guarded at 6 nodes");
    for (const IndependenceStatement& s : independence_model(cg.graph()))
        if (!oracle.query(set_of(s.x), set_of(s.y), set_of(s.z))) return s;
    return std::nullopt;
}

inline bool is_markovian(const IndependenceOracle& oracle, const ChainGraph& cg) {
    return !find_markov_violation(oracle, cg);
}

// All hybrid graphs over n default-labeled nodes, in a fixed order: each of
// the n(n-1)/2 pairs cycles through none, ->, <-, --.
inline void for_each_hybrid_graph(int n, const std::function<void(const HybridGraph&)>& fn) {
    if (n > 4) throw std::invalid_argument("hybrid graph enumeration is guarded at 4 nodes");
    std::vector<std::pair<NodeId, NodeId>> pairs;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
    std::vector<int> state(pairs.size(), 0);
    for (;;) {
        HybridGraph g = HybridGraph::with_default_labels(n);
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            switch (state[i]) {
            case 1: g.add_directed(pairs[i].first, pairs[i].second); break;
            case 2: g.add_directed(pairs[i].second, pairs[i].first); break;
            case 3: g.add_undirected(pairs[i].first, pairs[i].second); break;
            default: break;
            }
        }
        fn(g);
        std::size_t i = 0;
        while (i < state.size() && state[i] == 3) state[i++] = 0;
        if (i == state.size()) break;
        ++state[i];
    }
}

inline void for_each_chain_graph(int n, const std::function<void(const ChainGraph&)>& fn) {
    for_each_hybrid_graph(n, [&](const HybridGraph& g) {
        if (is_chain_graph(g)) fn(ChainGraph(g));
    });
}

inline std::vector<ChainGraph> all_chain_graphs(int n) {
    std::vector<ChainGraph> out;
    for_each_chain_graph(n, [&](const ChainGraph& g) { out.push_back(g); });
    return out;
}

// A graph is deflagged when every one of its flags appears, with the same
// orientation, in every chain graph of its triplex equivalence class.
inline bool flags_preserved_in_class(const ChainGraph& h) {
    const HybridGraph& g = h.graph();
    if (g.node_count() > 4)
        throw std::invalid_argument("class enumeration is guarded at 4 nodes");
    struct Flag {
        NodeId tail, center, line_end;
    };
    std::vector<Flag> flags;
    for (const Triplex& t : triplexes(g)) {
        if (triplex_kind(g, t) != TriplexKind::flag) continue;
        if (g.has_directed(t.low, t.center)) flags.push_back({t.low, t.center, t.high});
        else flags.push_back({t.high, t.center, t.low});
    }
    if (flags.empty()) return true;
    // class membership is index-aligned: same adjacencies, same triplexes
    const auto reference_triplexes = triplexes(g);
    const auto same_class = [&](const HybridGraph& m) {
        for (NodeId u = 0; u < g.node_count(); ++u)
            for (NodeId v = u + 1; v < g.node_count(); ++v)
                if (m.adjacent(u, v) != g.adjacent(u, v)) return false;
        return triplexes(m) == reference_triplexes;
    };
    bool preserved = true;
    for_each_hybrid_graph(g.node_count(), [&](const HybridGraph& member) {
        if (!preserved || !is_chain_graph(member) || !same_class(member)) return;
        for (const Flag& f : flags)
            if (!member.has_directed(f.tail, f.center) ||
                !member.has_undirected(f.center, f.line_end)) {
                preserved = false;
                return;
            }
    });
    return preserved;
}

// Five-node fixture: H's model is strictly inside F's, H's model matches
// its closed-form characterization exactly, and F, H are not triplex
// equivalent — so no single-edge addition or equivalence move links them,
// the failure mode of Meek-style growth for AMP chain graphs.
inline VerificationReport meek_counterexample_fixture() {
    const HybridGraph f = parse_cg("node A\nnode B\nnode C\nnode D\nnode E\n"
                                   "A -> D\nB -> E\nC -- D\nD -- E\n");
    const HybridGraph h = parse_cg("node A\nnode B\nnode C\nnode D\nnode E\n"
                                   "A -> D\nB -- E\nC -- D\nD -- E\nB -- D\n");
    const NodeId a = 0, b = 1, c = 2, d = 3, e = 4;
    VerificationReport report;

    const std::vector<IndependenceStatement> model_h = independence_model(h);
    const std::vector<IndependenceStatement> model_f = independence_model(f);

    {
        std::string witness;
        for (const IndependenceStatement& s : model_h)
            if (!std::binary_search(model_f.begin(), model_f.end(), s)) {
                witness = detail::query_text(h, set_of(s.x), set_of(s.y), set_of(s.z));
                break;
            }
        report.add("model-inclusion", witness.empty(), witness);
    }

    {
        // I1: A ⊥ Y | Z with Y, Z ⊆ {B,C,E} disjoint, Y nonempty (D never
        // conditioned on). I2: C ⊥ Y | Z with Y ⊆ {B,E} nonempty and
        // {A,D} ⊆ Z ⊆ {A,D} ∪ ({B,E} \ Y). The model must equal the
        // symmetric closure of I1 ∪ I2, statement for statement.
        std::vector<IndependenceStatement> expected;
        const NodeMask bce = mask_of({b, c, e});
        for (NodeMask y = 1; y < 32; ++y) {
            if (!y || (y & ~bce)) continue;
            for (NodeMask z = 0; z < 32; ++z) {
                if ((z & ~bce) || (z & y)) continue;
                expected.push_back(canonical_statement(NodeMask{1} << a, y, z));
            }
        }
        const NodeMask be = mask_of({b, e});
        const NodeMask ad = mask_of({a, d});
        for (NodeMask y = 1; y < 32; ++y) {
            if (!y || (y & ~be)) continue;
            for (NodeMask w = 0; w < 32; ++w) {
                if ((w & ~be) || (w & y)) continue;
                expected.push_back(canonical_statement(NodeMask{1} << c, y, ad | w));
            }
        }
        std::sort(expected.begin(), expected.end());
        expected.erase(std::unique(expected.begin(), expected.end()), expected.end());
        report.add("model-characterization", expected == model_h);
    }

    report.add("not-triplex-equivalent", !triplex_equivalent(f, h));
    return report;
}

} // namespace ampcg
