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

#include "wgl/game.hpp"

#include <cstddef>
#include <functional>
#include <random>
#include <vector>

namespace wgl {

/**
 * A relabelling of tokens: coordinate i moves to coordPerm[i] and its
 * values are renamed by valuePerms[i]. Token w maps to w' with
 * w'[coordPerm[i]] = valuePerms[i][w[i]].
 */
struct SymmetryElement
{
    std::vector<int> coordPerm;
    std::vector<std::vector<int>> valuePerms;
    std::vector<int> tokenPerm;   // token index -> image
    std::vector<int> tokenInv;
    std::vector<int> colourPerm;  // colour index -> image
    std::vector<int> colourInv;

    static SymmetryElement make(const GameParams& params, std::vector<int> coordPerm,
                                std::vector<std::vector<int>> valuePerms);

    TokenSet mapTokens(TokenSet set) const;
    TokenSet unmapTokens(TokenSet set) const;
    ColourSet mapColours(ColourSet set) const;
    ColourSet unmapColours(ColourSet set) const;
    Reintroduction map(Reintroduction r) const;
    Reintroduction unmap(Reintroduction r) const;
};

enum class CanonicalMethod { Exhaustive, Refined, Auto };

/**
 * Relabellings under which the comparison game is invariant: box
 * permutations, per-coordinate value permutations (all of them for
 * Adjacency::Any, reversal only for Adjacency::Successor) and permutations
 * of coordinates with equal factor. A disabled group is trivial and keeps
 * box order.
 */
class SymmetryGroup
{
public:
    static constexpr std::size_t kMaxElements = std::size_t{1} << 20;

    SymmetryGroup(const GameParams& params, Adjacency adjacency, bool enabled = true);

    const GameParams& params() const { return params_; }
    Adjacency adjacency() const { return adjacency_; }
    bool enabled() const { return enabled_; }
    bool permutesBoxes() const { return enabled_; }
    std::size_t size() const { return elements_.size(); }
    const SymmetryElement& element(std::size_t i) const { return elements_[i]; }
    const SymmetryElement& random(std::mt19937_64& rng) const;

private:
    GameParams params_;
    Adjacency adjacency_;
    bool enabled_;
    std::vector<SymmetryElement> elements_;
};

struct CanonicalKey
{
    Phase phase = Phase::ChooseBoxCount;
    int box = -1;
    std::vector<TokenSet> boxes;

    friend bool operator==(const CanonicalKey&, const CanonicalKey&) = default;
    friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

struct CanonicalKeyHash
{
    std::size_t operator()(const CanonicalKey& key) const noexcept;
};

/// rep.board.boxes[j] == element.mapTokens(pos.board.boxes[boxOrder[j]])
struct Transform
{
    SymmetryElement element;
    std::vector<int> boxOrder;
};

struct Canonical
{
    CanonicalKey key;
    Position rep;
    Transform transform;
};

/// Applies a group element and a box reordering to a position.
Position apply(const SymmetryElement& g, const std::vector<int>& boxOrder, const Position& pos);

Canonical canonicalize(const Position& pos, const SymmetryGroup& group,
                       CanonicalMethod method = CanonicalMethod::Auto);
CanonicalKey canonical_key(const Position& pos, const SymmetryGroup& group,
                           CanonicalMethod method = CanonicalMethod::Auto);

/// The position a key denotes (terminal keys give a board-less terminal).
Position position_of(const CanonicalKey& key);

/// Maps a move made at the representative back to the original position.
Move pull_back(const Move& move, const Transform& t);
/// Maps a move made at a position forward to its image under the transform.
Move push_forward(const Move& move, const Transform& t);

} // namespace wgl
