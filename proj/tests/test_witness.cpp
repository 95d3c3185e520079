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

#include "wgl/witness.hpp"

#include "witness_checks.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

using namespace wgl;

namespace {

LevelTree tree(std::vector<std::vector<std::string>> levels)
{
    return LevelTree{std::move(levels)};
}

bool traced(const std::vector<std::string>& trace, const std::string& needle)
{
    return std::any_of(trace.begin(), trace.end(), [&](const std::string& t) { return t.find(needle) != std::string::npos; });
}

} // namespace

TEST_CASE("level trees")
{
    auto t = tree({{""}, {"0", "1"}, {"00", "10", "11"}});
    CHECK(t.check(3).empty());
    CHECK_FALSE(t.check(2).empty());
    CHECK(t.children("1") == std::vector<std::string>{"10", "11"});
    CHECK(t.children("0") == std::vector<std::string>{"00"});
    CHECK(t.contains("11"));
    CHECK_FALSE(t.contains("01"));
    CHECK_FALSE(tree({{""}, {"0"}, {"10"}}).check(2).empty());
    CHECK_FALSE(tree({{""}, {}}).check(2).empty());
    CHECK(LevelTree::from_json(to_json(t)).levels == t.levels);

    std::mt19937_64 rng(3);
    for (int bound = 1; bound <= 4; ++bound)
        for (int i = 0; i < 20; ++i) {
            auto r = random_level_tree(bound, 12, rng);
            CHECK(r.depth() == 12);
            CHECK(witnesscheck::tree_shape(r, bound, "random").empty());
        }
}

TEST_CASE("a single path needs no taps and no splits")
{
    auto r = solve(GameParams(2, {2}));
    REQUIRE(r.winner == Player::P2);
    auto input = tree({{""}, {"0"}, {"00"}, {"000"}, {"0000"}});
    auto w = p2_to_reduction(r, input, 4);
    CHECK(witnesscheck::reduction_sound(r.params, input, 4, w).empty());
    CHECK_FALSE(traced(w.trace, "tap"));
    CHECK_FALSE(traced(w.trace, "split"));
    for (const auto& e : w.outer) CHECK(outer_map(w, e.colourPaths) == "0000");
}

TEST_CASE("a split at the root separates the two paths")
{
    auto r = solve(GameParams(2, {2}));
    auto input = tree({{""}, {"0", "1"}, {"00", "10"}, {"000", "100"}, {"0000", "1000"}});
    auto w = p2_to_reduction(r, input, 4);
    CHECK(witnesscheck::reduction_sound(r.params, input, 4, w).empty());
    CHECK(traced(w.trace, "level 1: split box 0"));
    std::set<std::string> reached;
    for (const auto& e : w.outer) reached.insert(*outer_map(w, e.colourPaths));
    CHECK(reached == std::set<std::string>{"0000", "1000"});
    CHECK(w.factorTrees.trees[0].levels.back().size() == 2);
}

TEST_CASE("a path dying at level three is tapped")
{
    auto r = solve(GameParams(2, {2}));
    auto input = tree({{""}, {"0", "1"}, {"00", "10"}, {"000"}, {"0000"}});
    auto w = p2_to_reduction(r, input, 4);
    CHECK(witnesscheck::reduction_sound(r.params, input, 4, w).empty());
    CHECK(traced(w.trace, "level 3: tap"));
    // the removed colour's path is gone from the factor tree
    CHECK(w.factorTrees.trees[0].levels.back().size() == 1);
    REQUIRE(w.outer.size() == 1);
    CHECK(w.outer[0].inputVertex == "0000");
}

TEST_CASE("reduction inputs over the level bound are rejected")
{
    auto r = solve(GameParams(2, {2}));
    auto wide = tree({{""}, {"0", "1"}, {"00", "01", "10"}});
    CHECK_THROWS_AS(p2_to_reduction(r, wide, 2), WitnessError);
    CHECK_THROWS_AS(p2_to_reduction(solve(GameParams(3, {2})), tree({{""}, {"0"}}), 1), WitnessError);
}

TEST_CASE("random reductions are sound")
{
    std::mt19937_64 rng(8);
    for (auto [k, factors] : std::vector<std::pair<int, std::vector<int>>>{{1, {2}}, {2, {2}}, {2, {2, 2}}, {3, {2, 2}}}) {
        auto r = solve(GameParams(k, factors));
        REQUIRE(r.winner == Player::P2);
        for (int i = 0; i < 15; ++i) {
            auto input = random_level_tree(k, 12, rng);
            auto w = p2_to_reduction(r, input, 12);
            CHECK(witnesscheck::reduction_sound(r.params, input, 12, w).empty());
        }
    }
}

TEST_CASE("adversaries")
{
    GameParams p(3, {2});
    auto r = solve(p);
    REQUIRE(r.winner == Player::P1);

    SUBCASE("an opponent that never spreads loses at once")
    {
        OpponentModel trivial{{{1, {{0, 1}}}, {2, {{0, 1}, {}}}, {3, {{0, 1}, {}, {}}}}, 1};
        auto a = p1_to_adversary(r, trivial, 6);
        CHECK(a.decided);
        CHECK(witnesscheck::adversary_sound(p, a, 6).empty());
        CHECK(a.tree.levels.back() == std::vector<std::string>{a.survivingPath});
    }
    SUBCASE("a small depth leaves the game undecided")
    {
        GameParams q(4, {2, 2});
        auto s = solve(q);
        REQUIRE(s.winner == Player::P1);
        // every box non-empty, so Player 1 still has to play
        OpponentModel spread{{{3, {{1, 3}, {0}, {2}}}}, 3};
        auto a = p1_to_adversary(s, spread, 0);
        CHECK_FALSE(a.decided);
        CHECK(to_json(a)["marker"] == "no empty box yet");
        CHECK(witnesscheck::adversary_sound(q, a, 0).empty());
        auto b = p1_to_adversary(s, spread, 20);
        CHECK(b.decided);
        CHECK(witnesscheck::adversary_sound(q, b, 20).empty());
    }
    SUBCASE("inconsistent opponents are rejected")
    {
        OpponentModel dup{{{2, {{0, 1}, {1}}}}, 0};
        CHECK_THROWS_AS(dup.validate(p), WitnessError);
        CHECK_THROWS_AS(p1_to_adversary(r, dup, 4), WitnessError);
        OpponentModel missing{{{2, {{0}, {}}}}, 0};
        CHECK_THROWS_AS(missing.validate(p), WitnessError);
        OpponentModel range{{{1, {{0, 1, 7}}}}, 0};
        CHECK_THROWS_AS(range.validate(p), WitnessError);
        CHECK_THROWS_AS(p1_to_adversary(solve(GameParams(2, {2})), OpponentModel{}, 4), WitnessError);
    }
    SUBCASE("random opponents")
    {
        std::mt19937_64 rng(12);
        for (int i = 0; i < 30; ++i) {
            auto opp = random_opponent(p, rng);
            CHECK(OpponentModel::from_json(to_json(opp)).distributions == opp.distributions);
            auto a = p1_to_adversary(r, opp, 20);
            CHECK(witnesscheck::adversary_sound(p, a, 20).empty());
            CHECK(a.decided);
        }
    }
}
