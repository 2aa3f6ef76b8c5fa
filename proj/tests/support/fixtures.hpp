#pragma once

// Small graphs shared across the test suites.

#include <string>

#include "ampcg/graph.hpp"
#include "ampcg/graph_io.hpp"

namespace ampcg::testing {

// Five-node deflagged pair: two triplex-equivalent chain graphs that differ
// in the orientation of the D-E edge.
inline HybridGraph deflagged_g() {
    return parse_cg("A -> C\nB -> D\nC -- D\nD -- E\nB -> E\n");
}

inline HybridGraph deflagged_h() {
    return parse_cg("A -> C\nB -> D\nC -- D\nD -> E\nB -> E\n");
}

// Five-node model-inclusion pair: I(meek_h) is strictly inside I(meek_f).
inline HybridGraph meek_f() {
    return parse_cg("node A\nnode B\nnode C\nnode D\nnode E\n"
                    "A -> D\nB -> E\nC -- D\nD -- E\n");
}

inline HybridGraph meek_h() {
    return parse_cg("node A\nnode B\nnode C\nnode D\nnode E\n"
                    "A -> D\nB -- E\nC -- D\nD -- E\nB -- D\n");
}

inline NodeId node(const HybridGraph& g, const std::string& name) {
    return *g.find_node(name);
}

} // namespace ampcg::testing
