#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "ampcg/ampcg.hpp"
#include "support/fixtures.hpp"

namespace fs = std::filesystem;
using namespace ampcg;
using namespace ampcg::testing;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout only
};

std::string cli_path() {
    const char* env = std::getenv("AMPCG_BIN");
    REQUIRE(env != nullptr);
    return env;
}

RunResult run(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult result;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.output.append(buf.data(), got);
    const int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("ampcg_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("learn from a graph oracle produces an equivalent chain graph") {
    TempDir tmp;
    const std::string g = tmp.file("g.cg", format_cg(deflagged_g()));
    const std::string out = tmp.file("out.cg");
    REQUIRE(run("learn --graph " + g + " -o " + out).exit_code == 0);
    REQUIRE(triplex_equivalent(parse_cg(slurp(out)), deflagged_g()));
    REQUIRE(run("equiv " + g + " " + out).exit_code == 0);
}

TEST_CASE("learn reports oracle query counts on stderr") {
    TempDir tmp;
    const std::string g = tmp.file("g.cg", format_cg(deflagged_g()));
    const std::string cmd =
        cli_path() + " learn --graph " + g + " -o " + tmp.file("out.cg") + " 2>&1 >/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string err;
    std::array<char, 4096> buf{};
    std::size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) err.append(buf.data(), got);
    pclose(pipe);
    REQUIRE(err.find("independence queries:") != std::string::npos);
    REQUIRE(err.find("|Z|=0") != std::string::npos);
}

TEST_CASE("learn rejects ambiguous or broken input") {
    TempDir tmp;
    const std::string g = tmp.file("g.cg", "A -> B\n");
    const std::string d = tmp.file("d.csv", "A,B\n1.0,2.0\n");
    REQUIRE(run("learn --graph " + g + " --data " + d).exit_code == 1);
    REQUIRE(run("learn").exit_code == 1);
    const std::string bad = tmp.file("bad.cg", "A -> \n");
    REQUIRE(run("learn --graph " + bad).exit_code == 1);
    REQUIRE(run("learn --graph " + tmp.file("missing.cg")).exit_code == 1);
    // the exact-oracle mode needs a valid chain graph as truth
    const std::string cyclic = tmp.file("cyclic.cg", "A -> B\nB -- C\nC -- A\n");
    REQUIRE(run("learn --graph " + cyclic).exit_code == 1);
}

TEST_CASE("learn from data runs the statistical pipeline") {
    TempDir tmp;
    const std::string g = tmp.file("g.cg", "A -> B\nB -> C\n");
    const std::string d = tmp.file("d.csv");
    REQUIRE(run("sample " + g + " -n 4000 --seed 5 -o " + d).exit_code == 0);
    const std::string out = tmp.file("out.cg");
    REQUIRE(run("learn --data " + d + " --alpha 0.01 -o " + out).exit_code == 0);
    const HybridGraph learned = parse_cg(slurp(out));
    REQUIRE(learned.node_count() == 3);
}

TEST_CASE("dot output is available") {
    TempDir tmp;
    // an undirected truth stays undirected through learning
    const std::string g = tmp.file("g.cg", "A -- B\nnode C\n");
    const RunResult r = run("learn --graph " + g + " --format dot");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.output.find("digraph") != std::string::npos);
    REQUIRE(r.output.find("[dir=none]") != std::string::npos);
}

TEST_CASE("sep reports separation status") {
    TempDir tmp;
    const std::string h = tmp.file("h.cg", format_cg(meek_h()));
    REQUIRE(run("sep " + h + " --x A --y B").output == "SEPARATED\n");
    REQUIRE(run("sep " + h + " --x A --y B,C,E").exit_code == 0);
    REQUIRE(run("sep " + h + " --x C --y B --z A,D").output == "SEPARATED\n");
    REQUIRE(run("sep " + h + " --x C --y B --z D").output == "CONNECTED\n");

    const std::string edge = tmp.file("edge.cg", "A -- B\n");
    REQUIRE(run("sep " + edge + " --x A --y B").output == "CONNECTED\n");
    REQUIRE(run("sep " + edge + " --x A --y B --z A").exit_code == 1);
    REQUIRE(run("sep " + edge + " --x A --y Q").exit_code == 1);
}

TEST_CASE("equiv distinguishes the fixtures") {
    TempDir tmp;
    const std::string g = tmp.file("g.cg", format_cg(deflagged_g()));
    const std::string h = tmp.file("h.cg", format_cg(deflagged_h()));
    const std::string f = tmp.file("f.cg", format_cg(meek_f()));
    const std::string mh = tmp.file("mh.cg", format_cg(meek_h()));
    REQUIRE(run("equiv " + g + " " + h).exit_code == 0);
    REQUIRE(run("equiv " + f + " " + mh).exit_code == 1);
}

TEST_CASE("sample is seed-deterministic") {
    TempDir tmp;
    const std::string g = tmp.file("g.cg", "A -> B\nB -- C\n");
    const std::string d1 = tmp.file("d1.csv");
    const std::string d2 = tmp.file("d2.csv");
    REQUIRE(run("sample " + g + " -n 100 --seed 7 -o " + d1).exit_code == 0);
    REQUIRE(run("sample " + g + " -n 100 --seed 7 -o " + d2).exit_code == 0);
    REQUIRE(slurp(d1) == slurp(d2));
    REQUIRE_FALSE(slurp(d1).empty());
}

TEST_CASE("verify prints a report") {
    TempDir tmp;
    const std::string g = tmp.file("g.cg", format_cg(deflagged_g()));
    const RunResult ok = run("verify " + g);
    REQUIRE(ok.exit_code == 0);
    REQUIRE(ok.output.find("CHECK chain-graph PASS") != std::string::npos);
    REQUIRE(ok.output.find("FAIL") == std::string::npos);

    const std::string cyclic = tmp.file("cyclic.cg", "A -> B\nB -- C\nC -- A\n");
    const RunResult bad = run("verify " + cyclic);
    REQUIRE(bad.exit_code == 2);
    REQUIRE(bad.output.find("CHECK chain-graph FAIL") != std::string::npos);
}

TEST_CASE("enumerate streams blank-line separated graphs") {
    const RunResult r = run("enumerate -n 2");
    REQUIRE(r.exit_code == 0);
    // four graphs on two nodes: none, ->, <-, --
    int blocks = 1;
    for (std::size_t i = 0; i + 1 < r.output.size(); ++i)
        if (r.output[i] == '\n' && r.output[i + 1] == '\n') ++blocks;
    REQUIRE(blocks == 4);
    REQUIRE(run("enumerate -n 5").exit_code == 1);
}
