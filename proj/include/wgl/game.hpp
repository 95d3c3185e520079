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

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace wgl {

/// Bit i set iff token with index i is present.
using TokenSet = std::uint64_t;
/// Bit c set iff colour with flat index c is present.
using ColourSet = std::uint64_t;

/// Thrown when a move or parameter violates the game rules.
class RuleViolation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

enum class Adjacency { Any, Successor };

struct RuleOptions
{
    Adjacency adjacency = Adjacency::Any;
    /// Allow a reintroduction chain ahead of a remove response.
    bool reintroOnRemove = false;
};

struct Colour
{
    int coord = 0;
    int value = 0;

    friend bool operator==(const Colour&, const Colour&) = default;
};

/// One coordinate value per factor.
using Token = std::vector<int>;

/**
 * The parameters k and n_0..n_l of the comparison game.
 *
 * Tokens are numbered in mixed radix with coordinate 0 least significant,
 * colours are numbered coordinate by coordinate. Both numberings have to
 * fit a 64-bit mask, which bounds the token universe at 64.
 */
class GameParams
{
public:
    static constexpr int kMaxTokens = 64;
    static constexpr int kMaxColours = 64;

    GameParams(int k, std::vector<int> factors);

    int k() const { return k_; }
    const std::vector<int>& factors() const { return factors_; }
    int coords() const { return static_cast<int>(factors_.size()); }
    int tokenCount() const { return tokenCount_; }
    int colourCount() const { return colourCount_; }

    TokenSet allTokens() const;
    ColourSet allColours() const;

    int colourIndex(Colour c) const;
    Colour colourAt(int index) const;
    int tokenIndex(std::span<const int> w) const;
    Token tokenAt(int index) const;
    int tokenValue(int token, int coord) const;
    /// Token index step for a unit change of one coordinate.
    int stride(int coord) const { return strides_[coord]; }

    /// Tokens having colour c.
    TokenSet tokensWith(int colour) const { return tokensWith_[colour]; }
    /// Colours carried by a token (one per coordinate).
    ColourSet coloursOf(int token) const { return coloursOf_[token]; }
    /// Colours occurring on some token of the set.
    ColourSet coloursIn(TokenSet tokens) const;
    /// Tokens carrying at least one colour of the set.
    TokenSet tokensWithAny(ColourSet colours) const;

    std::string describe() const;

    friend bool operator==(const GameParams& a, const GameParams& b)
    {
        return a.k_ == b.k_ && a.factors_ == b.factors_;
    }

private:
    int k_;
    std::vector<int> factors_;
    std::vector<int> strides_;
    std::vector<int> colourOffset_;
    int tokenCount_ = 1;
    int colourCount_ = 0;
    std::vector<TokenSet> tokensWith_;
    std::vector<ColourSet> coloursOf_;
};

struct Board
{
    std::vector<TokenSet> boxes;

    TokenSet tokens() const;
    bool hasEmptyBox() const;

    friend bool operator==(const Board&, const Board&) = default;
};

enum class Phase : std::uint8_t {
    ChooseBoxCount,   // P1 picks 1..k boxes
    Distribute,       // P2 distributes all tokens; `box` holds the box count
    P1ToMove,
    P2RespondRemove,  // `box` is the tapped box
    P2SplitPhase,     // `box` is the box being split
    TerminalP1Win,
    TerminalP2Win,
};

enum class Player { P1, P2 };

struct Position
{
    Phase phase = Phase::ChooseBoxCount;
    Board board;
    int box = -1;

    bool terminal() const
    {
        return phase == Phase::TerminalP1Win || phase == Phase::TerminalP2Win;
    }
    Player owner() const;

    friend bool operator==(const Position&, const Position&) = default;
};

struct Reintroduction
{
    int coord = 0;
    int from = 0;
    int to = 0;

    friend bool operator==(const Reintroduction&, const Reintroduction&) = default;
};

struct ChooseBoxes { int count = 1; friend bool operator==(const ChooseBoxes&, const ChooseBoxes&) = default; };
struct DistributeTokens { Board board; friend bool operator==(const DistributeTokens&, const DistributeTokens&) = default; };
struct Tap { int box = 0; friend bool operator==(const Tap&, const Tap&) = default; };
struct SplitBox { int box = 0; friend bool operator==(const SplitBox&, const SplitBox&) = default; };
struct RemoveResponse
{
    std::vector<Reintroduction> chain;
    ColourSet colours = 0;
    friend bool operator==(const RemoveResponse&, const RemoveResponse&) = default;
};
/// Reintroductions, then `first` goes to the split box and the rest of it to a new box.
struct SplitResponse
{
    std::vector<Reintroduction> chain;
    TokenSet first = 0;
    friend bool operator==(const SplitResponse&, const SplitResponse&) = default;
};

using Move = std::variant<ChooseBoxes, DistributeTokens, Tap, SplitBox, RemoveResponse, SplitResponse>;

std::string to_string(const GameParams& params, const Move& move);
std::string to_string(const GameParams& params, const Board& board);
std::string to_string(const GameParams& params, const Position& pos);
const char* to_string(Phase phase);

Position root_position();

/// Position after P2's initial distribution (or after a split distribution).
Position settle(Board board);

/**
 * Every total assignment of the token universe to `count` boxes, in
 * lexicographic order of the assignment vector. Assignments leaving a box
 * empty are included.
 */
std::vector<Board> initial_distributions(const GameParams& params, int count);

std::vector<Move> legal_p1_moves(const GameParams& params, const Position& pos);

bool covers(const GameParams& params, TokenSet box, ColourSet colours);
std::vector<ColourSet> legal_remove_responses(const GameParams& params, const Board& board, int box);
Position apply_remove(const GameParams& params, const Board& board, int box, ColourSet colours);

bool adjacent(const RuleOptions& opts, Reintroduction r);
bool can_reintroduce(const GameParams& params, const RuleOptions& opts, const Board& board, Reintroduction r);
Board reintroduce(const GameParams& params, const RuleOptions& opts, const Board& board, Reintroduction r);

/// A board reachable by a reintroduction chain, with one chain reaching it.
struct ReintroducedBoard
{
    Board board;
    std::vector<Reintroduction> chain;
};

/// All boards reachable by chains (including the empty chain), breadth-first.
std::vector<ReintroducedBoard> reintroduction_closure(const GameParams& params, const RuleOptions& opts,
                                                      const Board& board);

std::vector<SplitResponse> legal_split_responses(const GameParams& params, const RuleOptions& opts,
                                                 const Board& board, int box);
Position apply_split(const GameParams& params, const RuleOptions& opts, const Board& board, int box,
                     const SplitResponse& response);

/// Applies a move, throwing RuleViolation when it is not legal at `pos`.
Position apply_move(const GameParams& params, const RuleOptions& opts, const Position& pos, const Move& move);

/// All legal moves at `pos` with their outcomes, in a fixed order.
std::vector<std::pair<Move, Position>> successors(const GameParams& params, const RuleOptions& opts,
                                                  const Position& pos);

/// Empty string if the board satisfies the board invariants.
std::string check_board(const GameParams& params, const Board& board);

} // namespace wgl
