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

#include "wgl/game.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <set>
#include <sstream>

namespace wgl {

namespace {

constexpr int kMaxEnumeratedColours = 24;
constexpr std::uint64_t kMaxDistributions = std::uint64_t{1} << 24;

TokenSet bit(int i) { return TokenSet{1} << i; }

template <typename F>
void for_each_bit(std::uint64_t mask, F&& f)
{
    while (mask) {
        int i = std::countr_zero(mask);
        f(i);
        mask &= mask - 1;
    }
}

} // namespace

GameParams::GameParams(int k, std::vector<int> factors)
    : k_(k), factors_(std::move(factors))
{
    if (k_ < 1) throw RuleViolation("k must be at least 1");
    if (factors_.empty()) throw RuleViolation("at least one factor is required");
    for (int n : factors_) {
        if (n < 1) throw RuleViolation("every factor must be at least 1");
        if (n > kMaxColours) throw RuleViolation("factor exceeds the colour budget");
    }
    std::int64_t product = 1;
    for (int n : factors_) {
        product *= n;
        if (product > kMaxTokens)
            throw RuleViolation("token universe exceeds " + std::to_string(kMaxTokens) + " tokens");
        strides_.push_back(tokenCount_);
        tokenCount_ = static_cast<int>(product);
        colourOffset_.push_back(colourCount_);
        colourCount_ += n;
    }
    if (colourCount_ > kMaxColours) throw RuleViolation("colour universe exceeds 64 colours");

    tokensWith_.assign(colourCount_, 0);
    coloursOf_.assign(tokenCount_, 0);
    for (int t = 0; t < tokenCount_; ++t) {
        for (int i = 0; i < coords(); ++i) {
            int c = colourOffset_[i] + tokenValue(t, i);
            tokensWith_[c] |= bit(t);
            coloursOf_[t] |= bit(c);
        }
    }
}

TokenSet GameParams::allTokens() const
{
    return tokenCount_ == 64 ? ~TokenSet{0} : bit(tokenCount_) - 1;
}

ColourSet GameParams::allColours() const
{
    return colourCount_ == 64 ? ~ColourSet{0} : bit(colourCount_) - 1;
}

int GameParams::colourIndex(Colour c) const
{
    if (c.coord < 0 || c.coord >= coords() || c.value < 0 || c.value >= factors_[c.coord])
        throw RuleViolation("colour out of range");
    return colourOffset_[c.coord] + c.value;
}

Colour GameParams::colourAt(int index) const
{
    for (int i = coords() - 1; i >= 0; --i)
        if (index >= colourOffset_[i]) return {i, index - colourOffset_[i]};
    throw RuleViolation("colour index out of range");
}

int GameParams::tokenIndex(std::span<const int> w) const
{
    if (static_cast<int>(w.size()) != coords()) throw RuleViolation("token has wrong arity");
    int index = 0;
    for (int i = 0; i < coords(); ++i) {
        if (w[i] < 0 || w[i] >= factors_[i]) throw RuleViolation("token coordinate out of range");
        index += w[i] * strides_[i];
    }
    return index;
}

Token GameParams::tokenAt(int index) const
{
    Token w(coords());
    for (int i = 0; i < coords(); ++i) w[i] = tokenValue(index, i);
    return w;
}

int GameParams::tokenValue(int token, int coord) const
{
    return (token / strides_[coord]) % factors_[coord];
}

ColourSet GameParams::coloursIn(TokenSet tokens) const
{
    ColourSet out = 0;
    for_each_bit(tokens, [&](int t) { out |= coloursOf_[t]; });
    return out;
}

TokenSet GameParams::tokensWithAny(ColourSet colours) const
{
    TokenSet out = 0;
    for_each_bit(colours, [&](int c) { out |= tokensWith_[c]; });
    return out;
}

std::string GameParams::describe() const
{
    std::ostringstream os;
    os << "k=" << k_ << " factors=";
    for (std::size_t i = 0; i < factors_.size(); ++i) os << (i ? "," : "") << factors_[i];
    return os.str();
}

TokenSet Board::tokens() const
{
    TokenSet out = 0;
    for (auto b : boxes) out |= b;
    return out;
}

bool Board::hasEmptyBox() const
{
    return std::any_of(boxes.begin(), boxes.end(), [](TokenSet b) { return b == 0; });
}

Player Position::owner() const
{
    switch (phase) {
    case Phase::ChooseBoxCount:
    case Phase::P1ToMove:
        return Player::P1;
    case Phase::Distribute:
    case Phase::P2RespondRemove:
    case Phase::P2SplitPhase:
        return Player::P2;
    default:
        throw std::logic_error("terminal positions have no owner");
    }
}

const char* to_string(Phase phase)
{
    switch (phase) {
    case Phase::ChooseBoxCount: return "ChooseBoxCount";
    case Phase::Distribute: return "Distribute";
    case Phase::P1ToMove: return "P1ToMove";
    case Phase::P2RespondRemove: return "P2RespondRemove";
    case Phase::P2SplitPhase: return "P2SplitPhase";
    case Phase::TerminalP1Win: return "TerminalP1Win";
    case Phase::TerminalP2Win: return "TerminalP2Win";
    }
    return "?";
}

namespace {

std::string token_string(const GameParams& params, int t)
{
    bool wide = std::any_of(params.factors().begin(), params.factors().end(), [](int n) { return n > 10; });
    std::string s;
    for (int i = 0; i < params.coords(); ++i) {
        if (wide && i) s += '.';
        s += std::to_string(params.tokenValue(t, i));
    }
    return s;
}

std::string token_set_string(const GameParams& params, TokenSet set)
{
    std::string s = "{";
    bool first = true;
    for_each_bit(set, [&](int t) {
        if (!first) s += ',';
        first = false;
        s += token_string(params, t);
    });
    return s + "}";
}

std::string colour_set_string(const GameParams& params, ColourSet set)
{
    std::string s = "{";
    bool first = true;
    for_each_bit(set, [&](int c) {
        if (!first) s += ',';
        first = false;
        Colour col = params.colourAt(c);
        s += "(" + std::to_string(col.coord) + "," + std::to_string(col.value) + ")";
    });
    return s + "}";
}

std::string chain_string(const std::vector<Reintroduction>& chain)
{
    std::string s;
    for (const auto& r : chain) {
        s += "reintroduce(" + std::to_string(r.coord) + "," + std::to_string(r.from) + ")->(" +
             std::to_string(r.coord) + "," + std::to_string(r.to) + ") ";
    }
    return s;
}

} // namespace

std::string to_string(const GameParams& params, const Board& board)
{
    std::string s = "[";
    for (std::size_t i = 0; i < board.boxes.size(); ++i) {
        if (i) s += ',';
        s += token_set_string(params, board.boxes[i]);
    }
    return s + "]";
}

std::string to_string(const GameParams& params, const Position& pos)
{
    std::string s = to_string(pos.phase);
    if (pos.phase == Phase::Distribute || pos.phase == Phase::P2RespondRemove || pos.phase == Phase::P2SplitPhase)
        s += "(" + std::to_string(pos.box) + ")";
    if (pos.phase != Phase::ChooseBoxCount && pos.phase != Phase::Distribute) s += ":" + to_string(params, pos.board);
    return s;
}

std::string to_string(const GameParams& params, const Move& move)
{
    struct Visitor
    {
        const GameParams& params;
        std::string operator()(const ChooseBoxes& m) const { return "boxes " + std::to_string(m.count); }
        std::string operator()(const DistributeTokens& m) const { return "distribute " + to_string(params, m.board); }
        std::string operator()(const Tap& m) const { return "tap " + std::to_string(m.box); }
        std::string operator()(const SplitBox& m) const { return "split " + std::to_string(m.box); }
        std::string operator()(const RemoveResponse& m) const
        {
            return chain_string(m.chain) + "remove " + colour_set_string(params, m.colours);
        }
        std::string operator()(const SplitResponse& m) const
        {
            return chain_string(m.chain) + "keep " + token_set_string(params, m.first);
        }
    };
    return std::visit(Visitor{params}, move);
}

Position root_position()
{
    return Position{Phase::ChooseBoxCount, {}, -1};
}

Position settle(Board board)
{
    Position pos;
    if (board.boxes.empty())
        pos.phase = Phase::TerminalP2Win;
    else if (board.hasEmptyBox())
        pos.phase = Phase::TerminalP1Win;
    else
        pos.phase = Phase::P1ToMove;
    pos.board = std::move(board);
    return pos;
}

std::vector<Board> initial_distributions(const GameParams& params, int count)
{
    if (count < 1 || count > params.k()) throw RuleViolation("box count out of range");
    const int n = params.tokenCount();
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        total *= static_cast<std::uint64_t>(count);
        if (total > kMaxDistributions) throw std::length_error("too many initial distributions to enumerate");
    }
    std::vector<Board> out;
    out.reserve(total);
    std::vector<int> assign(n, 0);
    for (std::uint64_t step = 0; step < total; ++step) {
        Board b;
        b.boxes.assign(count, 0);
        for (int t = 0; t < n; ++t) b.boxes[assign[t]] |= bit(t);
        out.push_back(std::move(b));
        // increment, last token most significant
        for (int t = 0; t < n; ++t) {
            if (++assign[t] < count) break;
            assign[t] = 0;
        }
    }
    return out;
}

std::vector<Move> legal_p1_moves(const GameParams& params, const Position& pos)
{
    if (pos.phase == Phase::ChooseBoxCount) {
        std::vector<Move> out;
        for (int b = 1; b <= params.k(); ++b) out.emplace_back(ChooseBoxes{b});
        return out;
    }
    if (pos.phase != Phase::P1ToMove) throw RuleViolation("not Player 1's turn");
    const int boxes = static_cast<int>(pos.board.boxes.size());
    std::vector<Move> out;
    for (int b = 0; b < boxes; ++b) out.emplace_back(Tap{b});
    if (boxes < params.k())
        for (int b = 0; b < boxes; ++b) out.emplace_back(SplitBox{b});
    return out;
}

bool covers(const GameParams& params, TokenSet box, ColourSet colours)
{
    return (box & ~params.tokensWithAny(colours)) == 0;
}

std::vector<ColourSet> legal_remove_responses(const GameParams& params, const Board& board, int box)
{
    if (box < 0 || box >= static_cast<int>(board.boxes.size())) throw RuleViolation("box index out of range");
    if (params.colourCount() > kMaxEnumeratedColours) throw std::length_error("too many colours to enumerate");
    std::vector<ColourSet> out;
    const ColourSet total = params.allColours();
    for (ColourSet c = 0;; ++c) {
        if (covers(params, board.boxes[box], c)) out.push_back(c);
        if (c == total) break;
    }
    return out;
}

Position apply_remove(const GameParams& params, const Board& board, int box, ColourSet colours)
{
    if (box < 0 || box >= static_cast<int>(board.boxes.size())) throw RuleViolation("box index out of range");
    if ((colours & ~params.allColours()) != 0) throw RuleViolation("unknown colour");
    if (!covers(params, board.boxes[box], colours))
        throw RuleViolation("colour set does not cover the tapped box");
    const TokenSet dead = params.tokensWithAny(colours);
    Board next;
    for (int b = 0; b < static_cast<int>(board.boxes.size()); ++b)
        if (b != box) next.boxes.push_back(board.boxes[b] & ~dead);
    return settle(std::move(next));
}

bool adjacent(const RuleOptions& opts, Reintroduction r)
{
    if (r.from == r.to) return false;
    return opts.adjacency == Adjacency::Any || r.from - r.to == 1 || r.to - r.from == 1;
}

bool can_reintroduce(const GameParams& params, const RuleOptions& opts, const Board& board, Reintroduction r)
{
    if (r.coord < 0 || r.coord >= params.coords()) return false;
    const int n = params.factors()[r.coord];
    if (r.from < 0 || r.from >= n || r.to < 0 || r.to >= n) return false;
    if (!adjacent(opts, r)) return false;
    return (board.tokens() & params.tokensWith(params.colourIndex({r.coord, r.to}))) == 0;
}

Board reintroduce(const GameParams& params, const RuleOptions& opts, const Board& board, Reintroduction r)
{
    if (!can_reintroduce(params, opts, board, r)) throw RuleViolation("illegal reintroduction");
    const TokenSet source = params.tokensWith(params.colourIndex({r.coord, r.from}));
    const int delta = (r.to - r.from) * params.stride(r.coord);
    Board next = board;
    for (auto& box : next.boxes) {
        TokenSet added = 0;
        for_each_bit(box & source, [&](int t) { added |= bit(t + delta); });
        box |= added;
    }
    return next;
}

std::vector<ReintroducedBoard> reintroduction_closure(const GameParams& params, const RuleOptions& opts,
                                                      const Board& board)
{
    std::vector<ReintroducedBoard> out{{board, {}}};
    std::set<std::vector<TokenSet>> seen{board.boxes};
    for (std::size_t head = 0; head < out.size(); ++head) {
        const ColourSet present = params.coloursIn(out[head].board.tokens());
        for (int c = 0; c < params.colourCount(); ++c) {
            if (!(present & bit(c))) continue;
            const Colour from = params.colourAt(c);
            for (int to = 0; to < params.factors()[from.coord]; ++to) {
                Reintroduction r{from.coord, from.value, to};
                if (!can_reintroduce(params, opts, out[head].board, r)) continue;
                Board next = reintroduce(params, opts, out[head].board, r);
                if (!seen.insert(next.boxes).second) continue;
                auto chain = out[head].chain;
                chain.push_back(r);
                out.push_back({std::move(next), std::move(chain)});
            }
        }
    }
    return out;
}

std::vector<SplitResponse> legal_split_responses(const GameParams& params, const RuleOptions& opts,
                                                 const Board& board, int box)
{
    if (static_cast<int>(board.boxes.size()) >= params.k()) throw RuleViolation("board already has k boxes");
    if (box < 0 || box >= static_cast<int>(board.boxes.size())) throw RuleViolation("box index out of range");
    std::vector<SplitResponse> out;
    for (auto& rb : reintroduction_closure(params, opts, board)) {
        const TokenSet contents = rb.board.boxes[box];
        // every submask of the box contents, ascending
        TokenSet sub = 0;
        do {
            out.push_back({rb.chain, sub});
            sub = (sub - contents) & contents;
        } while (sub != 0);
    }
    return out;
}

namespace {

Board apply_chain(const GameParams& params, const RuleOptions& opts, Board board,
                  const std::vector<Reintroduction>& chain)
{
    for (const auto& r : chain) board = reintroduce(params, opts, board, r);
    return board;
}

} // namespace

Position apply_split(const GameParams& params, const RuleOptions& opts, const Board& board, int box,
                     const SplitResponse& response)
{
    if (static_cast<int>(board.boxes.size()) >= params.k()) throw RuleViolation("board already has k boxes");
    if (box < 0 || box >= static_cast<int>(board.boxes.size())) throw RuleViolation("box index out of range");
    Board next = apply_chain(params, opts, board, response.chain);
    const TokenSet contents = next.boxes[box];
    if ((response.first & ~contents) != 0) throw RuleViolation("split keeps tokens not in the box");
    next.boxes[box] = response.first;
    next.boxes.push_back(contents & ~response.first);
    return settle(std::move(next));
}

Position apply_move(const GameParams& params, const RuleOptions& opts, const Position& pos, const Move& move)
{
    switch (pos.phase) {
    case Phase::ChooseBoxCount: {
        auto* m = std::get_if<ChooseBoxes>(&move);
        if (!m || m->count < 1 || m->count > params.k()) throw RuleViolation("expected a box count in 1..k");
        return Position{Phase::Distribute, {}, m->count};
    }
    case Phase::Distribute: {
        auto* m = std::get_if<DistributeTokens>(&move);
        if (!m || static_cast<int>(m->board.boxes.size()) != pos.box) throw RuleViolation("expected a distribution");
        TokenSet seen = 0;
        for (auto b : m->board.boxes) {
            if (b & seen) throw RuleViolation("token in two boxes");
            seen |= b;
        }
        if (seen != params.allTokens()) throw RuleViolation("distribution must place every token");
        return settle(m->board);
    }
    case Phase::P1ToMove: {
        const int boxes = static_cast<int>(pos.board.boxes.size());
        if (auto* m = std::get_if<Tap>(&move)) {
            if (m->box < 0 || m->box >= boxes) throw RuleViolation("tap of a missing box");
            return Position{Phase::P2RespondRemove, pos.board, m->box};
        }
        if (auto* m = std::get_if<SplitBox>(&move)) {
            if (m->box < 0 || m->box >= boxes) throw RuleViolation("split of a missing box");
            if (boxes >= params.k()) throw RuleViolation("split with k boxes on the board");
            return Position{Phase::P2SplitPhase, pos.board, m->box};
        }
        throw RuleViolation("expected tap or split");
    }
    case Phase::P2RespondRemove: {
        auto* m = std::get_if<RemoveResponse>(&move);
        if (!m) throw RuleViolation("expected a remove response");
        if (!m->chain.empty() && !opts.reintroOnRemove)
            throw RuleViolation("reintroduction before removal is disabled");
        Board b = apply_chain(params, opts, pos.board, m->chain);
        return apply_remove(params, b, pos.box, m->colours);
    }
    case Phase::P2SplitPhase: {
        auto* m = std::get_if<SplitResponse>(&move);
        if (!m) throw RuleViolation("expected a split response");
        return apply_split(params, opts, pos.board, pos.box, *m);
    }
    default:
        throw RuleViolation("no moves at a terminal position");
    }
}

std::vector<std::pair<Move, Position>> successors(const GameParams& params, const RuleOptions& opts,
                                                  const Position& pos)
{
    std::vector<std::pair<Move, Position>> out;
    switch (pos.phase) {
    case Phase::ChooseBoxCount:
    case Phase::P1ToMove:
        for (auto& m : legal_p1_moves(params, pos)) {
            Position next = apply_move(params, opts, pos, m);
            out.emplace_back(std::move(m), std::move(next));
        }
        break;
    case Phase::Distribute:
        for (auto& b : initial_distributions(params, pos.box)) {
            Position next = settle(b);
            out.emplace_back(DistributeTokens{std::move(b)}, std::move(next));
        }
        break;
    case Phase::P2RespondRemove: {
        std::vector<ReintroducedBoard> boards;
        if (opts.reintroOnRemove)
            boards = reintroduction_closure(params, opts, pos.board);
        else
            boards.push_back({pos.board, {}});
        for (auto& rb : boards) {
            for (ColourSet c : legal_remove_responses(params, rb.board, pos.box))
                out.emplace_back(RemoveResponse{rb.chain, c}, apply_remove(params, rb.board, pos.box, c));
        }
        break;
    }
    case Phase::P2SplitPhase:
        for (auto& r : legal_split_responses(params, opts, pos.board, pos.box)) {
            Position next = apply_split(params, opts, pos.board, pos.box, r);
            out.emplace_back(std::move(r), std::move(next));
        }
        break;
    default:
        break;
    }
    return out;
}

std::string check_board(const GameParams& params, const Board& board)
{
    if (static_cast<int>(board.boxes.size()) > params.k()) return "more than k boxes";
    TokenSet seen = 0;
    for (auto b : board.boxes) {
        if (b & ~params.allTokens()) return "unknown token";
        if (b & seen) return "token in two boxes";
        seen |= b;
    }
    return {};
}

} // namespace wgl
