// ampcg: command-line front end for the chain graph toolkit.
//
// Exit codes: 0 success; 1 usage, file or parse error (and `equiv` on
// non-equivalent inputs); 2 semantic failure (learned graph is not a valid
// chain graph, or a `verify` check failed).

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ampcg/ampcg.hpp"

namespace {

using namespace ampcg;

NodeSet resolve_nodes(const HybridGraph& g, const std::vector<std::string>& names) {
    NodeSet out;
    for (const std::string& name : names) {
        const auto v = g.find_node(name);
        if (!v) throw std::runtime_error("unknown node: " + name);
        out.push_back(*v);
    }
    return sorted_unique(std::move(out));
}

void write_graph(const HybridGraph& g, const std::string& path, const std::string& format) {
    const std::string text = format == "dot" ? to_dot(g) : format_cg(g);
    if (path.empty()) std::cout << text;
    else write_text_file(path, text);
}

void print_stats(const QueryStats& stats) {
    std::cerr << "independence queries: " << stats.total << " (";
    bool first = true;
    for (const auto& [size, count] : stats.by_conditioning_size) {
        if (!first) std::cerr << ", ";
        std::cerr << "|Z|=" << size << ": " << count;
        first = false;
    }
    std::cerr << ")\n";
}

int cmd_learn(const std::string& graph_file, const std::string& data_file, double alpha,
              const std::string& out_path, const std::string& format) {
    std::shared_ptr<const IndependenceOracle> inner;
    std::vector<std::string> labels;
    if (!graph_file.empty()) {
        const HybridGraph g = read_cg_file(graph_file);
        labels = g.labels();
        inner = make_graph_oracle(ChainGraph(g));
    } else {
        Dataset d = read_csv_file(data_file);
        labels = d.columns;
        inner = make_data_oracle(std::move(d), alpha);
    }
    CountingOracle oracle(inner);
    const LearnResult result = learn(oracle, labels);
    write_graph(result.graph, out_path, format);
    print_stats(oracle.stats());
    if (!result.is_valid_chain_graph) {
        std::cerr << "warning: learned graph is not a chain graph (oracle not faithful)\n";
        return 2;
    }
    return 0;
}

int cmd_sep(const std::string& graph_file, const std::vector<std::string>& x,
            const std::vector<std::string>& y, const std::vector<std::string>& z) {
    const HybridGraph g = read_cg_file(graph_file);
    const bool sep = separated(g, resolve_nodes(g, x), resolve_nodes(g, y), resolve_nodes(g, z));
    std::cout << (sep ? "SEPARATED" : "CONNECTED") << '\n';
    return 0;
}

int cmd_equiv(const std::string& file_g, const std::string& file_h) {
    const HybridGraph g = read_cg_file(file_g);
    const HybridGraph h = read_cg_file(file_h);
    const bool eq = triplex_equivalent(g, h);
    std::cout << (eq ? "EQUIVALENT" : "NOT EQUIVALENT") << '\n';
    return eq ? 0 : 1;
}

int cmd_sample(const std::string& graph_file, int n, std::uint64_t seed,
               const std::string& out_path) {
    const ChainGraph cg(read_cg_file(graph_file));
    const Dataset d = sample(random_params(cg, seed), n, seed);
    if (out_path.empty()) std::cout << format_csv(d);
    else write_text_file(out_path, format_csv(d));
    return 0;
}

int cmd_verify(const std::string& graph_file) {
    const HybridGraph g = read_cg_file(graph_file);
    VerificationReport report;
    const bool is_cg = is_chain_graph(g);
    report.add("chain-graph", is_cg, is_cg ? "" : "semidirected cycle present");
    if (is_cg) {
        const ChainGraph cg(g);
        const GraphOracle oracle(cg);
        for (CheckResult& c : check_markov_conditions(oracle, cg).checks)
            report.checks.push_back(std::move(c));
    }
    std::cout << report.to_text();
    return report.all_passed() ? 0 : 2;
}

int cmd_enumerate(int n) {
    bool first = true;
    for_each_chain_graph(n, [&](const ChainGraph& g) {
        if (!first) std::cout << '\n';
        std::cout << format_cg(g.graph());
        first = false;
    });
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Structure learning toolkit for AMP chain graphs"};
    app.require_subcommand(1);

    std::string graph_file, data_file, out_path, format = "cg";
    double alpha = 0.01;
    auto* learn_cmd = app.add_subcommand(
        "learn", "Learn a chain graph from a faithful graph oracle or from Gaussian data");
    learn_cmd->add_option("--graph", graph_file, "chain graph file (exact oracle mode)");
    learn_cmd->add_option("--data", data_file, "CSV dataset (Fisher-z oracle mode)");
    learn_cmd->add_option("--alpha", alpha, "significance level for the Fisher-z test")
        ->check(CLI::Range(1e-12, 1.0 - 1e-12));
    learn_cmd->add_option("-o,--out", out_path, "output path (default: stdout)");
    learn_cmd->add_option("--format", format, "output format: cg or dot")
        ->check(CLI::IsMember({"cg", "dot"}));

    std::string sep_graph;
    std::vector<std::string> xs, ys, zs;
    auto* sep_cmd = app.add_subcommand("sep", "Decide separation X _||_ Y | Z in a graph");
    sep_cmd->add_option("graph", sep_graph, "graph file")->required();
    sep_cmd->add_option("--x", xs, "left node set")->required()->delimiter(',');
    sep_cmd->add_option("--y", ys, "right node set")->required()->delimiter(',');
    sep_cmd->add_option("--z", zs, "conditioning set")->delimiter(',');

    std::string equiv_g, equiv_h;
    auto* equiv_cmd =
        app.add_subcommand("equiv", "Test triplex equivalence (exit 0 iff equivalent)");
    equiv_cmd->add_option("first", equiv_g, "first graph file")->required();
    equiv_cmd->add_option("second", equiv_h, "second graph file")->required();

    std::string sample_graph, sample_out;
    int sample_n = 0;
    std::uint64_t seed = 0;
    auto* sample_cmd =
        app.add_subcommand("sample", "Draw Gaussian data Markovian wrt a chain graph");
    sample_cmd->add_option("graph", sample_graph, "chain graph file")->required();
    sample_cmd->add_option("-n", sample_n, "number of rows")->required()->check(CLI::PositiveNumber);
    sample_cmd->add_option("--seed", seed, "random seed");
    sample_cmd->add_option("-o,--out", sample_out, "output CSV path (default: stdout)");

    std::string verify_graph;
    auto* verify_cmd =
        app.add_subcommand("verify", "Check chain-graph validity and the Markov conditions");
    verify_cmd->add_option("graph", verify_graph, "graph file")->required();

    int enum_n = 0;
    auto* enum_cmd = app.add_subcommand("enumerate", "Stream all chain graphs on n nodes");
    enum_cmd->add_option("-n", enum_n, "node count (at most 4)")->required()
        ->check(CLI::Range(1, 4));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    try {
        if (learn_cmd->parsed()) {
            if (graph_file.empty() == data_file.empty())
                throw std::runtime_error("learn needs exactly one of --graph or --data");
            return cmd_learn(graph_file, data_file, alpha, out_path, format);
        }
        if (sep_cmd->parsed()) return cmd_sep(sep_graph, xs, ys, zs);
        if (equiv_cmd->parsed()) return cmd_equiv(equiv_g, equiv_h);
        if (sample_cmd->parsed()) return cmd_sample(sample_graph, sample_n, seed, sample_out);
        if (verify_cmd->parsed()) return cmd_verify(verify_graph);
        if (enum_cmd->parsed()) return cmd_enumerate(enum_n);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
