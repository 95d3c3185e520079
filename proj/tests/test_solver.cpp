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

#include "wgl/solver.hpp"

#include "oracle.hpp"
#include "strategy_mutation.hpp"

#include <doctest.h>

#include <random>
#include <set>

using namespace wgl;

namespace {

Position to_position(const oracle::State& s)
{
    static constexpr Phase phases[] = {Phase::ChooseBoxCount, Phase::Distribute,    Phase::P1ToMove,
                                       Phase::P2RespondRemove, Phase::P2SplitPhase, Phase::TerminalP1Win,
                                       Phase::TerminalP2Win};
    return Position{phases[s.phase], Board{s.boxes}, s.box};
}

} // namespace

TEST_CASE("oracle agrees on the hand-checked points")
{
    CHECK_FALSE(oracle::solve(1, {2})->p1Wins);
    CHECK_FALSE(oracle::solve(2, {2})->p1Wins);
    CHECK(oracle::solve(3, {2})->p1Wins);
    CHECK_FALSE(oracle::solve(3, {2, 2})->p1Wins);
}

TEST_CASE("winners of the small games")
{
    CHECK(solve(GameParams(1, {2})).winner == Player::P2);
    CHECK(solve(GameParams(2, {2})).winner == Player::P2);
    CHECK(solve(GameParams(3, {2})).winner == Player::P1);
    for (int k = 1; k <= 3; ++k) CHECK(solve(GameParams(k, {2, 2})).winner == Player::P2);
    CHECK(solve(GameParams(4, {2, 2})).winner == Player::P1);
}

TEST_CASE("one box never loses")
{
    auto arena = build_arena(GameParams(1, {2}));
    bool p1Terminal = false;
    for (std::uint32_t v = 0; v < arena.nodes.size(); ++v) p1Terminal |= arena.isTarget(v);
    // the initial distribution has one box holding everything
    CHECK_FALSE(p1Terminal);
}

TEST_CASE("arena nodes are the orbits of the raw reachable states")
{
    for (auto [k, factors] : std::vector<std::pair<int, std::vector<int>>>{{1, {2}}, {2, {2}}, {3, {2}}, {2, {2, 2}}, {2, {3}}}) {
        GameParams p(k, factors);
        auto raw = oracle::solve(k, factors);
        REQUIRE(raw);
        for (bool sym : {true, false}) {
            SolverConfig cfg;
            cfg.symmetry = sym;
            auto arena = build_arena(p, cfg);
            std::set<CanonicalKey> orbits;
            for (const auto& s : raw->reachable) orbits.insert(canonical_key(to_position(s), arena.group));
            CHECK(orbits.size() == arena.nodes.size());
            for (const auto& key : orbits) CHECK(arena.find(key).has_value());
            if (!sym) {
                // without symmetry only the finished positions are merged, one node per outcome
                std::size_t live = 0;
                std::set<int> outcomes;
                for (const auto& st : raw->reachable) {
                    if (st.phase >= 5) outcomes.insert(st.phase);
                    else ++live;
                }
                CHECK(arena.nodes.size() == live + outcomes.size());
            }
        }
    }
}

TEST_CASE("symmetry reduction and the refined canonicaliser preserve the winner")
{
    for (auto [k, factors] : std::vector<std::pair<int, std::vector<int>>>{
             {1, {2}}, {2, {2}}, {3, {2}}, {4, {2}}, {2, {2, 2}}, {3, {2, 2}}, {2, {3}}, {3, {3}}, {2, {2, 3}}}) {
        GameParams p(k, factors);
        const auto raw = oracle::solve(k, factors);
        SolverConfig off;
        off.symmetry = false;
        const auto base = solve(p, off).winner;
        if (raw) CHECK((base == Player::P1) == raw->p1Wins);
        for (auto method : {CanonicalMethod::Exhaustive, CanonicalMethod::Refined}) {
            SolverConfig cfg;
            cfg.method = method;
            auto r = solve(p, cfg);
            CHECK(r.winner == base);
            CHECK(verify_strategy(r));
        }
    }
}

TEST_CASE("winner is invariant under factor order")
{
    CHECK(solve(GameParams(2, {2, 3})).winner == solve(GameParams(2, {3, 2})).winner);
    CHECK(solve(GameParams(3, {2, 3})).winner == solve(GameParams(3, {3, 2})).winner);
    CHECK(canonical_factors({3, 2, 2}) == std::vector<int>{2, 2, 3});
}

TEST_CASE("strategies verify and corrupted ones do not")
{
    std::mt19937_64 rng(21);
    for (auto [k, factors] : std::vector<std::pair<int, std::vector<int>>>{{1, {2}}, {2, {2}}, {3, {2}}, {3, {2, 2}}, {4, {2, 2}}}) {
        auto r = solve(GameParams(k, factors));
        REQUIRE(verify_strategy(r));
        for (int i = 0; i < 10; ++i) {
            auto bad = mutate_strategy(r, rng);
            REQUIRE(bad.has_value());
            CHECK_FALSE(verify_strategy(*bad));
        }
    }
}

TEST_CASE("solving is deterministic and thread count does not matter")
{
    GameParams p(3, {2, 2});
    auto a = solve(p);
    auto b = solve(p);
    CHECK(a.strategy == b.strategy);
    CHECK(a.stats.nodes == b.stats.nodes);
    CHECK(a.stats.edges == b.stats.edges);
    CHECK(to_json(a, false) == to_json(b, false));

    SolverConfig par;
    par.threads = 4;
    for (auto [k, factors] : std::vector<std::pair<int, std::vector<int>>>{{3, {2}}, {3, {2, 2}}, {4, {2, 2}}, {3, {2, 2, 2}}}) {
        GameParams q(k, factors);
        auto seq = build_arena(q);
        auto thr = build_arena(q, par);
        REQUIRE(seq.nodes.size() == thr.nodes.size());
        std::multiset<std::pair<CanonicalKey, CanonicalKey>> es, et;
        for (const auto& n : seq.nodes)
            for (auto s : n.succ) es.emplace(n.key, seq.nodes[s].key);
        for (const auto& n : thr.nodes)
            for (auto s : n.succ) et.emplace(n.key, thr.nodes[s].key);
        CHECK(es == et);
        auto rs = solve(seq), rt = solve(thr);
        CHECK(rs.winner == rt.winner);
        CHECK(verify_strategy(rt));
    }
}

TEST_CASE("resource caps raise with partial statistics")
{
    SolverConfig cfg;
    cfg.nodeCap = 20;
    try {
        (void)solve(GameParams(4, {2, 2, 2}), cfg);
        FAIL("expected a resource error");
    } catch (const ResourceError& e) {
        CHECK(e.partial().nodes > 20);
    }
}

TEST_CASE("sweeps keep winners monotone")
{
    auto s = sweep(1, 3, {{2}});
    REQUIRE(s.rows.size() == 3);
    CHECK(*s.rows[0].winner == Player::P2);
    CHECK(*s.rows[1].winner == Player::P2);
    CHECK(*s.rows[2].winner == Player::P1);
    CHECK(s.monotonicityFlags.empty());
    CHECK(sweep_csv(s, false) == "k,factors,winner,nodes,millis\n1,\"2\",P2,5,0\n2,\"2\",P2,13,0\n3,\"2\",P1,15,0\n");

    auto t = sweep(1, 4, {{2, 2}, {2}});
    CHECK(t.monotonicityFlags.empty());
    for (const auto& row : t.rows) CHECK(row.verified);

    // a fabricated inconsistency is flagged
    std::vector<SweepRow> rows(2);
    rows[0].k = 1;
    rows[0].factors = {2};
    rows[0].winner = Player::P1;
    rows[1].k = 2;
    rows[1].factors = {2};
    rows[1].winner = Player::P2;
    CHECK_FALSE(monotonicity_flags(rows).empty());
}

TEST_CASE("frontier report covers both index readings")
{
    auto s = sweep(1, 3, {{2}, {2, 2}});
    auto report = frontier_report(s.rows);
    CHECK(report.size() == 2 * s.rows.size());
    auto text = frontier_report_text(report);
    CHECK(text.find("l=count-1") != std::string::npos);
    CHECK(text.find("l=count:") != std::string::npos);
}

TEST_CASE("exports")
{
    auto arena = build_arena(GameParams(2, {2}));
    auto dot = to_dot(arena);
    CHECK(dot.rfind("digraph", 0) == 0);
    CHECK(dot.find("doublecircle") != std::string::npos);
    auto j = to_json(solve(arena), false);
    CHECK(j["winner"] == "P2");
    CHECK(j["stats"]["millis"] == 0);
    CHECK(j["strategy"].is_array());
    CHECK(j["params"]["k"] == 2);
}
