/*
 * Copyright 2026 The wgl Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// wgl: command-line front end for the comparison game solver and the
// sorting / finite choice constructions.
//
// Exit codes: 0 success, 1 usage or validation error, 2 resource cap hit.

#include "wgl/diagonalizer.hpp"
#include "wgl/solver.hpp"
#include "wgl/sort_ops.hpp"
#include "wgl/witness.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

using namespace wgl;
using nlohmann::json;

namespace {

struct Settings
{
    std::string adjacency = "any";
    bool reintroOnRemove = false;
    std::string symmetry = "on";
    std::size_t nodeCap = 10'000'000;
    std::int64_t timeCapMillis = 600'000;
    int threads = 1;
    std::string format = "json";
    bool timing = false;
};

/// Overrides the built-in defaults with the file named by WGL_CONFIG.
void load_config(Settings& s)
{
    const char* path = std::getenv("WGL_CONFIG");
    if (!path || !*path) return;
    std::ifstream in(path);
    if (!in) throw std::invalid_argument(std::string("cannot read WGL_CONFIG file ") + path);
    json j;
    try {
        j = json::parse(in);
        s.adjacency = j.value("adjacencyMode", s.adjacency);
        s.reintroOnRemove = j.value("reintroOnRemove", s.reintroOnRemove);
        if (j.contains("symmetry")) {
            const auto& v = j.at("symmetry");
            s.symmetry = v.is_boolean() ? (v.get<bool>() ? "on" : "off") : v.get<std::string>();
        }
        s.nodeCap = j.value("nodeCap", s.nodeCap);
        s.timeCapMillis = j.value("timeCapMillis", s.timeCapMillis);
        s.threads = j.value("threadCount", s.threads);
        s.format = j.value("outputFormat", s.format);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("bad WGL_CONFIG file: ") + e.what());
    }
}

SolverConfig solver_config(const Settings& s)
{
    SolverConfig c;
    if (s.adjacency == "any") c.rules.adjacency = Adjacency::Any;
    else if (s.adjacency == "successor") c.rules.adjacency = Adjacency::Successor;
    else throw std::invalid_argument("adjacency must be any or successor");
    if (s.symmetry != "on" && s.symmetry != "off") throw std::invalid_argument("symmetry must be on or off");
    if (s.nodeCap == 0 || s.timeCapMillis <= 0 || s.threads < 1) throw std::invalid_argument("caps must be positive");
    c.rules.reintroOnRemove = s.reintroOnRemove;
    c.symmetry = s.symmetry == "on";
    c.nodeCap = s.nodeCap;
    c.timeCapMillis = s.timeCapMillis;
    c.threads = s.threads;
    return c;
}

std::vector<int> parse_list(const std::string& text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw std::invalid_argument("not a number list: " + text);
        }
    }
    if (out.empty()) throw std::invalid_argument("empty number list");
    return out;
}

std::pair<int, int> parse_range(const std::string& text)
{
    auto dots = text.find("..");
    if (dots == std::string::npos) {
        int k = parse_list(text).at(0);
        return {k, k};
    }
    return {parse_list(text.substr(0, dots)).at(0), parse_list(text.substr(dots + 2)).at(0)};
}

std::vector<int> parse_digits(const std::string& text)
{
    std::vector<int> out;
    for (char c : text) {
        if (c < '0' || c > '9') throw std::invalid_argument(std::string("not a symbol: ") + c);
        out.push_back(c - '0');
    }
    return out;
}

json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::string read_text_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string digits(const std::vector<int>& v)
{
    std::string s;
    for (int x : v) s += static_cast<char>('0' + x);
    return s;
}

void add_rule_flags(CLI::App* cmd, Settings& s)
{
    cmd->add_option("--adjacency", s.adjacency, "reintroduction adjacency: any|successor");
    cmd->add_flag("--reintro-on-remove", s.reintroOnRemove, "allow reintroductions before a remove response");
    cmd->add_option("--symmetry", s.symmetry, "symmetry reduction: on|off");
    cmd->add_option("--node-cap", s.nodeCap, "arena node budget");
    cmd->add_option("--time-cap", s.timeCapMillis, "time budget in milliseconds");
    cmd->add_option("--threads", s.threads, "expansion threads");
    cmd->add_flag("--timing", s.timing, "report wall-clock milliseconds (otherwise 0)");
}

int resource_exit(const ResourceError& e)
{
    std::cerr << "resource cap: " << e.what() << "\n";
    std::cout << json{{"error", e.what()},
                      {"partial", {{"nodes", e.partial().nodes}, {"edges", e.partial().edges},
                                   {"peak_frontier", e.partial().peakFrontier}}}}
                     .dump(2)
              << "\n";
    return 2;
}

} // namespace

int main(int argc, char** argv)
{
    Settings s;
    try {
        load_config(s);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }

    CLI::App app{"Comparison game solver and sorting constructions"};
    app.require_subcommand(1);

    // solve
    int k = 0;
    std::string factors;
    auto* solveCmd = app.add_subcommand("solve", "solve one comparison game");
    solveCmd->add_option("--k", k, "number of boxes")->required();
    solveCmd->add_option("--factors", factors, "comma-separated factor sizes")->required();
    solveCmd->add_option("--format", s.format, "json|dot|text");
    add_rule_flags(solveCmd, s);

    // sweep
    std::string kRange;
    std::vector<std::string> families;
    bool report = false;
    std::string sweepFormat = "csv";
    auto* sweepCmd = app.add_subcommand("sweep", "solve a grid of parameters");
    sweepCmd->add_option("--k", kRange, "k or kmin..kmax")->required();
    sweepCmd->add_option("--factors", families, "factor list (repeatable)")->required();
    sweepCmd->add_option("--format", sweepFormat, "csv|json");
    sweepCmd->add_flag("--report", report, "append the frontier comparison");
    add_rule_flags(sweepCmd, s);

    // witness
    auto* witnessCmd = app.add_subcommand("witness", "reduction witnesses from winning strategies");
    witnessCmd->require_subcommand(1);
    std::string treeFile, opponentFile;
    int depth = 10;
    std::uint64_t seed = 1;
    auto* p2Cmd = witnessCmd->add_subcommand("p2", "input tree against a Player 2 strategy");
    p2Cmd->add_option("--k", k)->required();
    p2Cmd->add_option("--factors", factors)->required();
    p2Cmd->add_option("--tree", treeFile, "LevelTree JSON file (random if omitted)");
    p2Cmd->add_option("--depth", depth);
    p2Cmd->add_option("--seed", seed);
    add_rule_flags(p2Cmd, s);
    auto* p1Cmd = witnessCmd->add_subcommand("p1", "adversary from a Player 1 strategy");
    p1Cmd->add_option("--k", k)->required();
    p1Cmd->add_option("--factors", factors)->required();
    p1Cmd->add_option("--opponent", opponentFile, "opponent model JSON file (random if omitted)");
    p1Cmd->add_option("--depth", depth);
    p1Cmd->add_option("--seed", seed);
    add_rule_flags(p1Cmd, s);

    // sort
    auto* sortCmd = app.add_subcommand("sort", "sorting constructions");
    sortCmd->require_subcommand(1);
    int d = 2, u = 0, n = 1, tail = 0;
    std::string prefix, graphFile, intervals;
    auto seqOptions = [&](CLI::App* c) {
        c->add_option("--prefix", prefix, "finite prefix, one digit per symbol");
        c->add_option("--tail", tail, "symbol repeated forever")->required();
    };
    auto* evalCmd = sortCmd->add_subcommand("eval", "Sort_d of prefix.tail^omega");
    evalCmd->add_option("--d", d, "alphabet size")->required();
    seqOptions(evalCmd);
    auto* partialCmd = sortCmd->add_subcommand("partial", "u-partial sort of a finite string");
    partialCmd->add_option("--u", u)->required();
    partialCmd->add_option("--prefix", prefix)->required();
    auto* stripCmd = sortCmd->add_subcommand("strip", "drop zeros and decrement");
    stripCmd->add_option("--d", d)->required();
    seqOptions(stripCmd);
    auto* fccCmd = sortCmd->add_subcommand("fcc", "component of vertex 0 through Sort");
    fccCmd->add_option("--graph", graphFile, "edge-list file")->required();
    auto* viaCmd = sortCmd->add_subcommand("via-fcc", "binary Sort through a component graph");
    seqOptions(viaCmd);
    auto* productCmd = sortCmd->add_subcommand("product", "Sort_{n+1} through n binary sorts");
    productCmd->add_option("--n", n)->required();
    seqOptions(productCmd);
    auto* xc1Cmd = sortCmd->add_subcommand("xc1", "one-dimensional convex choice through Sort");
    xc1Cmd->add_option("--intervals", intervals, "nested intervals lo:hi,lo:hi,... (rationals)")->required();

    // diag
    auto* diagCmd = app.add_subcommand("diag", "priority construction against a functional table");
    diagCmd->require_subcommand(1);
    std::string alpha, phiFile;
    int stages = 0;
    bool diagJson = false;
    auto* runCmd = diagCmd->add_subcommand("run", "run the stages and check the invariants");
    runCmd->add_option("--k", k)->required();
    runCmd->add_option("--alpha", alpha)->required();
    runCmd->add_option("--phi", phiFile, "table JSON file")->required();
    runCmd->add_option("--stages", stages)->required();
    runCmd->add_flag("--json", diagJson, "print the stage history");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (*solveCmd) {
            const auto config = solver_config(s);
            const GameParams params(k, canonical_factors(parse_list(factors)));
            const auto arena = build_arena(params, config);
            const auto result = solve(arena);
            if (s.format == "json") std::cout << to_json(result, s.timing).dump(2) << "\n";
            else if (s.format == "dot") std::cout << to_dot(arena);
            else if (s.format == "text")
                std::cout << params.describe() << ": " << to_string(result.winner) << " wins (" << result.stats.nodes
                          << " positions, " << result.stats.edges << " moves)\n";
            else throw std::invalid_argument("format must be json, dot or text");
            return 0;
        }
        if (*sweepCmd) {
            const auto config = solver_config(s);
            auto [kMin, kMax] = parse_range(kRange);
            if (kMin < 1 || kMax < kMin) throw std::invalid_argument("bad k range " + kRange);
            std::vector<std::vector<int>> fams;
            for (const auto& f : families) fams.push_back(parse_list(f));
            const auto result = sweep(kMin, kMax, fams, config);
            if (sweepFormat == "csv") std::cout << sweep_csv(result, s.timing);
            else if (sweepFormat == "json") std::cout << sweep_json(result, s.timing).dump(2) << "\n";
            else throw std::invalid_argument("format must be csv or json");
            if (report) std::cout << "\n" << frontier_report_text(frontier_report(result.rows));
            for (const auto& flag : result.monotonicityFlags) std::cerr << "monotonicity: " << flag << "\n";
            bool capped = std::any_of(result.rows.begin(), result.rows.end(), [](const auto& r) { return !r.winner; });
            return capped ? 2 : 0;
        }
        if (*p2Cmd) {
            const auto config = solver_config(s);
            const GameParams params(k, canonical_factors(parse_list(factors)));
            const auto result = solve(params, config);
            if (result.winner != Player::P2) throw std::invalid_argument(params.describe() + " is won by Player 1");
            std::mt19937_64 rng(seed);
            const auto tree = treeFile.empty() ? random_level_tree(k, depth, rng)
                                               : LevelTree::from_json(read_json_file(treeFile));
            const auto w = p2_to_reduction(result, tree, depth);
            auto out = to_json(w);
            out["input"] = to_json(tree);
            out["violations"] = check_reduction(params, tree, depth, w);
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*p1Cmd) {
            const auto config = solver_config(s);
            const GameParams params(k, canonical_factors(parse_list(factors)));
            const auto result = solve(params, config);
            if (result.winner != Player::P1) throw std::invalid_argument(params.describe() + " is won by Player 2");
            std::mt19937_64 rng(seed);
            const auto opponent = opponentFile.empty() ? random_opponent(params, rng)
                                                       : OpponentModel::from_json(read_json_file(opponentFile));
            const auto r = p1_to_adversary(result, opponent, depth);
            auto out = to_json(r);
            out["opponent"] = to_json(opponent);
            out["violations"] = check_adversary(params, r);
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*evalCmd) {
            std::cout << sort_d(FinSeq(d, parse_digits(prefix), tail)).str() << "\n";
            return 0;
        }
        if (*partialCmd) {
            std::cout << digits(u_partial_sort(parse_digits(prefix), u)) << "\n";
            return 0;
        }
        if (*stripCmd) {
            const FinSeq x(d, parse_digits(prefix), tail);
            const auto st = strip_zeros_decrement(x);
            std::cout << json{{"rest", st.rest.str()}, {"zeros", st.zeroCount},
                              {"recombined", recombine_stripped(st).str()}, {"direct", sort_d(x).str()}}
                             .dump(2)
                      << "\n";
            return 0;
        }
        if (*fccCmd) {
            const auto g = GraphInstance::parse(read_text_file(graphFile));
            const auto enc = fcc_to_sort(g);
            const auto sorted = sort_d(enc.sortInput);
            const auto comp = fcc_decode(g, sorted);
            std::vector<int> members;
            for (int v = 0; v < g.size; ++v)
                if (comp[v]) members.push_back(v);
            std::cout << json{{"sortInput", enc.sortInput.str()}, {"sorted", sorted.str()},
                              {"counters", enc.counters}, {"component", members}}
                             .dump(2)
                      << "\n";
            return 0;
        }
        if (*viaCmd) {
            std::cout << sort_via_fcc(FinSeq(2, parse_digits(prefix), tail)).str() << "\n";
            return 0;
        }
        if (*productCmd) {
            const FinSeq x(n + 1, parse_digits(prefix), tail);
            std::vector<FinSeq> sorted;
            json comps = json::array();
            for (const auto& c : product_translate(n, x)) {
                sorted.push_back(sort_d(c));
                comps.push_back({{"component", c.str()}, {"sorted", sorted.back().str()}});
            }
            std::cout << json{{"components", comps}, {"recombined", product_recombine(sorted).str()}}.dump(2) << "\n";
            return 0;
        }
        if (*xc1Cmd) {
            std::vector<Interval> stream;
            std::stringstream ss(intervals);
            std::string item;
            while (std::getline(ss, item, ',')) {
                auto colon = item.find(':');
                if (colon == std::string::npos) throw std::invalid_argument("interval needs lo:hi: " + item);
                stream.push_back({Rational::parse(item.substr(0, colon)), Rational::parse(item.substr(colon + 1))});
            }
            const auto enc = xc1_via_sort(stream);
            const auto sorted = sort_d(enc.sortInput);
            json outputs = json::array();
            for (const auto& q : xc1_decode(stream, sorted)) outputs.push_back(q.str());
            std::cout << json{{"sortInput", enc.sortInput.str()}, {"sorted", sorted.str()},
                              {"exclusions", enc.exclusions}, {"outputs", outputs}}
                             .dump(2)
                      << "\n";
            return 0;
        }
        if (*runCmd) {
            const auto phi = MonotoneTable::from_json(read_json_file(phiFile));
            const auto cs = run_stages(k, parse_digits(alpha), phi, stages);
            const auto rep = check_invariants(cs, k);
            if (diagJson) {
                auto out = to_json(cs);
                out["violations"] = rep.violations;
                std::cout << out.dump(2) << "\n";
            } else if (rep.ok()) {
                std::cout << "ok\n";
            } else {
                for (const auto& v : rep.violations) std::cout << v << "\n";
            }
            return rep.ok() ? 0 : 1;
        }
    } catch (const ResourceError& e) {
        return resource_exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
