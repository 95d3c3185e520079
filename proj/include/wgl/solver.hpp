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

#pragma once

#include "wgl/canonical.hpp"
#include "wgl/game.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace wgl {

struct SolverConfig
{
    RuleOptions rules;
    bool symmetry = true;
    CanonicalMethod method = CanonicalMethod::Auto;
    std::size_t nodeCap = 10'000'000;
    std::int64_t timeCapMillis = 600'000;
    int threads = 1;
};

struct ArenaStats
{
    std::size_t nodes = 0;
    std::size_t edges = 0;
    std::size_t peakFrontier = 0;
    std::int64_t millis = 0;
};

/// Node or time budget exhausted; carries the statistics gathered so far.
class ResourceError : public std::runtime_error
{
public:
    ResourceError(const std::string& what, ArenaStats partial)
        : std::runtime_error(what), partial_(partial)
    {
    }
    const ArenaStats& partial() const { return partial_; }

private:
    ArenaStats partial_;
};

struct ArenaNode
{
    CanonicalKey key;
    std::vector<std::uint32_t> succ;
};

/**
 * The forward-reachable quotient arena. Node 0 is the root (Player 1
 * choosing the box count). Successor lists are deduplicated and keep the
 * order in which `successors()` first produced each target.
 */
struct Arena
{
    GameParams params;
    SolverConfig config;
    SymmetryGroup group;
    std::vector<ArenaNode> nodes;
    std::unordered_map<CanonicalKey, std::uint32_t, CanonicalKeyHash> index;
    ArenaStats stats;

    std::optional<std::uint32_t> find(const CanonicalKey& key) const;
    bool isTarget(std::uint32_t v) const { return nodes[v].key.phase == Phase::TerminalP1Win; }
    bool isTerminal(std::uint32_t v) const
    {
        auto p = nodes[v].key.phase;
        return p == Phase::TerminalP1Win || p == Phase::TerminalP2Win;
    }
    Player owner(std::uint32_t v) const { return position_of(nodes[v].key).owner(); }
};

Arena build_arena(const GameParams& params, const SolverConfig& config = {});

struct Attractor
{
    std::vector<bool> inside;
    /// Steps to the target under optimal play; -1 outside.
    std::vector<int> rank;
};

/// Player 1 attractor of the TerminalP1Win node (least fixpoint).
Attractor p1_attractor(const Arena& arena);

struct SolveResult
{
    GameParams params;
    SolverConfig config;
    Player winner = Player::P2;
    /// Positional strategy of the winner, keyed by canonical position; moves
    /// refer to the representative `position_of(key)`.
    std::map<CanonicalKey, Move> strategy;
    ArenaStats stats;
};

SolveResult solve(const Arena& arena);
SolveResult solve(const GameParams& params, const SolverConfig& config = {});

/// The move at `from` (a representative) leading to the canonical successor `to`.
std::optional<Move> move_between(const Arena& arena, std::uint32_t from, std::uint32_t to);

/**
 * Re-checks a strategy against the game rules, independent of the arena
 * edges. Player 1: every play following the strategy reaches
 * TerminalP1Win without repeating a position. Player 2: the positions
 * reachable under the strategy avoid TerminalP1Win and every Player 2
 * position among them has a legal strategy move.
 */
bool verify_strategy(const SolveResult& result);

/// Canonical keys visited when playing the winner's strategy against every opponent move.
std::vector<CanonicalKey> strategy_reach(const SolveResult& result);

/// Plays the strategy at an arbitrary (non-canonical) position.
std::optional<Move> strategy_move(const SolveResult& result, const SymmetryGroup& group, const Position& pos);

struct SweepRow
{
    int k = 0;
    std::vector<int> factors;
    std::optional<Player> winner;
    bool verified = false;
    ArenaStats stats;
    std::string error;
};

struct SweepResult
{
    std::vector<SweepRow> rows;
    std::vector<std::string> monotonicityFlags;
};

/// Sorts a factor list ascending.
std::vector<int> canonical_factors(std::vector<int> factors);

SweepResult sweep(int kMin, int kMax, const std::vector<std::vector<int>>& families, const SolverConfig& config = {});

/// Monotonicity violations among solved rows (empty when consistent).
std::vector<std::string> monotonicity_flags(const std::vector<SweepRow>& rows);

struct FrontierEntry
{
    int k = 0;
    int factorCount = 0;
    std::string convention;  // "l=count-1" or "l=count"
    int ell = 0;
    Player computed = Player::P2;
    bool p2ClaimApplies = false;
    bool p1ClaimApplies = false;
    bool consistent = true;
};

/// Compares the computed winners (all factors 2) against both readings of the index l.
std::vector<FrontierEntry> frontier_report(const std::vector<SweepRow>& rows);
std::string frontier_report_text(const std::vector<FrontierEntry>& entries);

const char* to_string(Player p);

std::string sweep_csv(const SweepResult& sweep, bool timing);
nlohmann::json sweep_json(const SweepResult& sweep, bool timing);
nlohmann::json to_json(const SolveResult& result, bool timing);
std::string to_dot(const Arena& arena);

} // namespace wgl
