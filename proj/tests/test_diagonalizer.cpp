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

#include "wgl/diagonalizer.hpp"

#include "diag_checks.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>

using namespace wgl;

namespace {

bool mentions(const std::vector<std::string>& vs, const std::string& needle)
{
    return std::any_of(vs.begin(), vs.end(), [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

} // namespace

TEST_CASE("table queries")
{
    MonotoneTable t({{{0}, -1, "0"}, {{0, 1}, -1, "01"}, {{0}, 1, "011"}, {{1}, 0, "1"}});
    CHECK_NOTHROW(t.validate(2));
    CHECK(t.query({0}, 0, 4) == "0");
    CHECK(t.query({0, 1}, 0, 4) == "01");
    // a tail symbol extends the prefix as far as needed
    CHECK(t.query({0}, 1, 4) == "011");
    CHECK(t.query({}, 0, 4) == "0");
    CHECK(t.query({1}, 0, 4) == "1");
    CHECK(t.query({}, 1, 4).empty()); // the entry for 1 insists on tail 0
    CHECK(t.query({0}, 1, 2) == "01");
    CHECK(t.query({0}, 1, 0).empty());
    CHECK(MonotoneTable::from_json(t.to_json()).query({0}, 1, 4) == "011");
}

TEST_CASE("bad tables are rejected")
{
    CHECK_THROWS_AS(MonotoneTable({{{0}, -1, "01"}, {{0}, -1, "10"}}).validate(2), TableError);
    CHECK_THROWS_AS(MonotoneTable({{{0}, -1, "01"}, {{0, 0}, -1, "0"}}).validate(2), TableError);
    CHECK_THROWS_AS(MonotoneTable({{{2}, -1, "0"}}).validate(2), TableError);
    CHECK_THROWS_AS(MonotoneTable({{{0}, -1, "02"}}).validate(2), TableError);
    CHECK_THROWS_AS(run_stages(2, {0, 0}, MonotoneTable({{{0}, -1, "1"}, {{0}, -1, "0"}}), 2), TableError);
    // different tails never meet, so they may disagree
    CHECK_NOTHROW(MonotoneTable({{{0}, 0, "0"}, {{0}, 1, "1"}}).validate(2));
}

TEST_CASE("an empty functional keeps one branch at the root")
{
    const std::vector<int> alpha{0, 1, 1, 0, 1, 0, 0, 1, 0, 1};
    auto cs = run_stages(2, alpha, MonotoneTable{}, 10);
    REQUIRE(cs.history.size() == 11);
    for (int s = 1; s <= 10; ++s) {
        const auto& rec = cs.history[s];
        CHECK(rec.state[0] == 1);
        CHECK(rec.rho[0] == std::string{});
    }
    CHECK(cs.history[1].actions[0] == Action::Found);
    CHECK(cs.history[5].actions[0] == Action::Wait);
    const auto& last = cs.last();
    int leaves = 0;
    for (const auto& v : last.tree) leaves += v.size() == 10;
    CHECK(leaves == 2);
    auto report = check_invariants(cs, 2);
    CHECK(report.ok());
    CHECK(diagcheck::check(cs).violations.empty());
}

TEST_CASE("injected faults are reported")
{
    const std::vector<int> alpha{0, 1, 1, 0, 1, 0, 0, 1};
    auto cs = run_stages(2, alpha, MonotoneTable{}, 8);
    REQUIRE(check_invariants(cs, 2).ok());

    auto extra = cs;
    extra.history.back().tree.insert("00000001");
    extra.history.back().tree.insert("10000001");
    CHECK(mentions(check_invariants(extra, 2).violations, "extendible leaves"));
    CHECK(mentions(diagcheck::check(extra).violations, "(I)"));

    auto dropped = cs;
    dropped.history[4].tree.erase("1000");
    CHECK_FALSE(check_invariants(dropped, 2).ok());

    auto lost = cs;
    lost.history[3].rho[0] = "0";
    CHECK_FALSE(check_invariants(lost, 2).ok());
    CHECK_FALSE(diagcheck::check(lost).violations.empty());
}

TEST_CASE("a functional that commits to a branch is diagonalized against")
{
    // whatever the input, Φ commits to the left child
    MonotoneTable phi({{{}, -1, "0"}});
    const std::vector<int> alpha(12, 0);
    auto cs = run_stages(2, alpha, phi, 12);
    auto report = check_invariants(cs, 2);
    CHECK(report.ok());
    CHECK(report.diagonalizations > 0);
    auto mine = diagcheck::check(cs);
    CHECK(mine.violations.empty());
    CHECK(mine.diagonalizations > 0);
    bool acted = false;
    for (const auto& rec : cs.history)
        acted |= std::find(rec.actions.begin(), rec.actions.end(), Action::Diagonalize) != rec.actions.end();
    CHECK(acted);
    // the committed branch dies
    for (const auto& v : cs.last().tree) CHECK((v.size() < 12 || v[0] == '1'));
}

TEST_CASE("random constructions keep every invariant")
{
    std::mt19937_64 rng(17);
    std::size_t diagonalizations = 0;
    for (int i = 0; i < 150; ++i) {
        const int k = 1 + static_cast<int>(rng() % 4);
        const int stages = 1 + static_cast<int>(rng() % 40);
        auto alpha = diagcheck::random_alpha(k, stages, rng);
        auto phi = random_table(k, 1 + rng() % 40, rng);
        REQUIRE_NOTHROW(phi.validate(k));
        auto cs = run_stages(k, alpha, phi, stages);
        auto report = check_invariants(cs, k);
        CHECK(report.ok());
        auto mine = diagcheck::check(cs);
        CHECK(mine.violations.empty());
        CHECK(mine.diagonalizations == report.diagonalizations);
        diagonalizations += report.diagonalizations;
        CHECK(to_json(cs)["history"].size() == static_cast<std::size_t>(stages + 1));
    }
    CHECK(diagonalizations > 0);
}

TEST_CASE("stage counts are bounded by the input")
{
    CHECK_THROWS(run_stages(2, {0, 1}, MonotoneTable{}, 3));
    CHECK_THROWS(run_stages(2, {0, 2}, MonotoneTable{}, 2));
    CHECK_THROWS(run_stages(0, {}, MonotoneTable{}, 0));
}
