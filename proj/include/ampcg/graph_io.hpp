#pragma once

// CG text format and DOT export.
//
// One item per line:
//   node <name>     declare an isolated node
//   <u> -> <v>      directed edge
//   <u> -- <v>      undirected edge
// '#' starts a comment; names are [A-Za-z0-9_]+. Nodes are auto-declared on
// first mention, and first-mention order fixes the index order.

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ampcg/graph.hpp"

namespace ampcg {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline bool valid_name(std::string_view tok) {
    if (tok.empty()) return false;
    for (char c : tok)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    return true;
}

inline NodeId node_for(HybridGraph& g, const std::string& tok, int lineno) {
    if (!valid_name(tok))
        throw ParseError("line " + std::to_string(lineno) + ": bad node token '" + tok + "'");
    if (auto v = g.find_node(tok)) return *v;
    return g.add_node(tok);
}

} // namespace detail

inline HybridGraph parse_cg(std::string_view text) {
    HybridGraph g{std::vector<std::string>{}};
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream toks(line);
        std::vector<std::string> t;
        for (std::string tok; toks >> tok;) t.push_back(std::move(tok));
        if (t.empty()) continue;
        try {
            if (t.size() == 2 && t[0] == "node") {
                if (!detail::valid_name(t[1]))
                    throw ParseError("line " + std::to_string(lineno) + ": bad node token '" + t[1] + "'");
                g.add_node(t[1]);
            } else if (t.size() == 3 && t[1] == "->") {
                const NodeId u = detail::node_for(g, t[0], lineno);
                const NodeId v = detail::node_for(g, t[2], lineno);
                g.add_directed(u, v);
            } else if (t.size() == 3 && t[1] == "--") {
                const NodeId u = detail::node_for(g, t[0], lineno);
                const NodeId v = detail::node_for(g, t[2], lineno);
                g.add_undirected(u, v);
            } else {
                throw ParseError("line " + std::to_string(lineno) + ": expected 'node <name>', '<u> -> <v>' or '<u> -- <v>'");
            }
        } catch (const std::invalid_argument& e) {
            throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return g;
}

// Every node is declared explicitly, in index order, so parsing the output
// reproduces the graph exactly (including node indexing).
inline std::string format_cg(const HybridGraph& g) {
    std::ostringstream out;
    for (NodeId v = 0; v < g.node_count(); ++v) out << "node " << g.label(v) << '\n';
    for (auto [u, v] : g.directed_edges()) out << g.label(u) << " -> " << g.label(v) << '\n';
    for (auto [u, v] : g.undirected_edges()) out << g.label(u) << " -- " << g.label(v) << '\n';
    return out.str();
}

// Write-only visualization handoff; undirected edges render as unadorned
// lines via dir=none.
inline std::string to_dot(const HybridGraph& g) {
    std::ostringstream out;
    out << "digraph G {\n";
    for (NodeId v = 0; v < g.node_count(); ++v) out << "  " << g.label(v) << ";\n";
    for (auto [u, v] : g.directed_edges())
        out << "  " << g.label(u) << " -> " << g.label(v) << ";\n";
    for (auto [u, v] : g.undirected_edges())
        out << "  " << g.label(u) << " -> " << g.label(v) << " [dir=none];\n";
    out << "}\n";
    return out.str();
}

inline HybridGraph read_cg_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_cg(buf.str());
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

} // namespace ampcg
