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

#include "wgl/solver.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace wgl {

/// Bad witness input: a tree over its level bound, inconsistent opponent data, ...
class WitnessError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/**
 * A binary tree given level by level: level s holds the vertices of
 * length s, sorted. Vertices without a child on the next level are dead.
 */
struct LevelTree
{
    std::vector<std::vector<std::string>> levels;

    int depth() const { return static_cast<int>(levels.size()) - 1; }
    bool contains(const std::string& v) const;
    /// Children of `v` present on the next level.
    std::vector<std::string> children(const std::string& v) const;

    /// Empty if valid: level 0 is {""}, level s holds distinct length-s
    /// strings extending level s-1, and every level has 1..bound vertices.
    std::string check(int bound) const;

    static LevelTree from_json(const nlohmann::json& j);
};

nlohmann::json to_json(const LevelTree& tree);

/// One tree per coordinate; tree i has at most n_i vertices per level.
struct FactorTrees
{
    std::vector<LevelTree> trees;
};

nlohmann::json to_json(const FactorTrees& trees);

/// Random tree of the given depth with 1..bound vertices on every level.
LevelTree random_level_tree(int bound, int depth, std::mt19937_64& rng);

struct OuterEntry
{
    int token = 0;
    std::vector<std::string> colourPaths; // one factor-tree vertex per coordinate
    int box = 0;
    std::string inputVertex;
};

struct ReductionWitness
{
    FactorTrees factorTrees;
    /// Surviving tokens at the end of the simulation and where they point.
    std::vector<OuterEntry> outer;
    std::vector<std::string> trace;
    Position finalPosition;
    std::vector<std::string> boxVertex;
};

/**
 * Plays the input tree as Player 1 against the Player 2 strategy, one level
 * at a time: dying vertices are tapped first, then branching vertices are
 * split. Colour (i,j) follows a path through factor tree i.
 */
ReductionWitness p2_to_reduction(const SolveResult& strategy, const LevelTree& input, int depth);

/// The input-tree vertex selected by one path per factor tree, if any surviving token matches.
std::optional<std::string> outer_map(const ReductionWitness& w, const std::vector<std::string>& paths);

/// Soundness violations of a reduction witness (empty when sound).
std::vector<std::string> check_reduction(const GameParams& params, const LevelTree& input, int depth,
                                         const ReductionWitness& w);

nlohmann::json to_json(const ReductionWitness& w);

/**
 * A Player 2 opponent: fixed initial distributions per box count (box ->
 * token indices) and a seeded uniform policy for every other choice.
 */
struct OpponentModel
{
    std::map<int, std::vector<std::vector<int>>> distributions;
    std::uint64_t seed = 0;

    /// Throws WitnessError on a token in two boxes, a missing token or a count mismatch.
    void validate(const GameParams& params) const;
    static OpponentModel from_json(const nlohmann::json& j);
};

nlohmann::json to_json(const OpponentModel& m);

OpponentModel random_opponent(const GameParams& params, std::mt19937_64& rng);

struct AdversaryResult
{
    LevelTree tree;
    bool decided = false;
    int emptyBox = -1;
    std::string survivingPath;
    std::vector<std::string> trace;
    Position finalPosition;
    std::vector<std::string> boxVertex;
};

/**
 * Plays the Player 1 strategy against the opponent for at most `depth`
 * Player 1 moves and records the input tree that the play describes.
 * When a box runs empty only its path survives.
 */
AdversaryResult p1_to_adversary(const SolveResult& strategy, const OpponentModel& opponent, int depth);

/// Violations of the adversary contract (empty when sound).
std::vector<std::string> check_adversary(const GameParams& params, const AdversaryResult& r);

nlohmann::json to_json(const AdversaryResult& r);

} // namespace wgl
