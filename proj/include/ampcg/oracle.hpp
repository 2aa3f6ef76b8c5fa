#pragma once

// Conditional-independence oracle interface: query(X, Y, Z) with disjoint
// node sets, nonempty X and Y. Answers are deterministic for the lifetime
// of an oracle and symmetric in X and Y.

#include <cstddef>
#include <map>
#include <memory>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "ampcg/graph.hpp"
#include "ampcg/separation.hpp"

namespace ampcg {

class IndependenceOracle {
public:
    virtual ~IndependenceOracle() = default;

    // True iff X is independent of Y given Z.
    virtual bool query(const NodeSet& x, const NodeSet& y, const NodeSet& z) const = 0;
};

namespace detail {

// Sorted sets, sides ordered lexicographically: exploits symmetry for caching.
using QueryKey = std::tuple<NodeSet, NodeSet, NodeSet>;

inline QueryKey canonical_key(const NodeSet& x, const NodeSet& y, const NodeSet& z) {
    NodeSet sx = sorted_unique(x), sy = sorted_unique(y), sz = sorted_unique(z);
    if (sy < sx) std::swap(sx, sy);
    return {std::move(sx), std::move(sy), std::move(sz)};
}

} // namespace detail

// Faithful oracle: answers are exactly the separations of the chain graph.
// Pure; safe to query from multiple threads.
class GraphOracle final : public IndependenceOracle {
public:
    explicit GraphOracle(ChainGraph g) : g_(std::move(g)) {}

    bool query(const NodeSet& x, const NodeSet& y, const NodeSet& z) const override {
        return separated(g_.graph(), x, y, z);
    }

    const ChainGraph& chain_graph() const { return g_; }

private:
    ChainGraph g_;
};

inline std::shared_ptr<const IndependenceOracle> make_graph_oracle(ChainGraph g) {
    return std::make_shared<GraphOracle>(std::move(g));
}

struct QueryStats {
    std::size_t total = 0;
    std::map<std::size_t, std::size_t> by_conditioning_size;
};

// Transparent pass-through that counts queries and memoizes on the
// canonical key. Mutates internal state on query; single-threaded.
class CountingOracle final : public IndependenceOracle {
public:
    explicit CountingOracle(std::shared_ptr<const IndependenceOracle> inner)
        : inner_(std::move(inner)) {
        if (!inner_) throw std::invalid_argument("counting oracle needs an inner oracle");
    }

    bool query(const NodeSet& x, const NodeSet& y, const NodeSet& z) const override {
        auto key = detail::canonical_key(x, y, z);
        stats_.total += 1;
        stats_.by_conditioning_size[std::get<2>(key).size()] += 1;
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        const bool answer = inner_->query(x, y, z);
        cache_.emplace(std::move(key), answer);
        return answer;
    }

    const QueryStats& stats() const { return stats_; }
    std::size_t distinct_queries() const { return cache_.size(); }

private:
    std::shared_ptr<const IndependenceOracle> inner_;
    mutable QueryStats stats_;
    mutable std::map<detail::QueryKey, bool> cache_;
};

} // namespace ampcg
