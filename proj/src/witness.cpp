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

#include <algorithm>
#include <numeric>
#include <set>

namespace wgl {

namespace {

int bit_width_for(int n)
{
    int w = 0;
    while ((1 << w) < n) ++w;
    return w;
}

std::string encode(int j, int width)
{
    std::string s(width, '0');
    for (int b = 0; b < width; ++b)
        if (j & (1 << (width - 1 - b))) s[b] = '1';
    return s;
}

bool is_prefix(const std::string& p, const std::string& s)
{
    return p.size() <= s.size() && std::equal(p.begin(), p.end(), s.begin());
}

std::vector<std::string> sorted(std::set<std::string> s)
{
    return {s.begin(), s.end()};
}

Move require_move(const SolveResult& result, const SymmetryGroup& group, const Position& pos)
{
    auto m = strategy_move(result, group, pos);
    if (!m) throw std::logic_error("strategy has no move at " + to_string(result.params, pos));
    return *m;
}

const std::vector<Reintroduction>* chain_of(const Move& m)
{
    if (auto* r = std::get_if<RemoveResponse>(&m)) return &r->chain;
    if (auto* s = std::get_if<SplitResponse>(&m)) return &s->chain;
    return nullptr;
}

/// Colour paths through the factor trees, advanced one level per event.
class ColourPaths
{
public:
    ColourPaths(const GameParams& params, ColourSet live) : params_(params)
    {
        trees_.trees.resize(params.coords());
        for (int i = 0; i < params.coords(); ++i) {
            const int n = params.factors()[i];
            const int w = bit_width_for(n);
            for (int l = 0; l <= w; ++l) {
                std::set<std::string> level;
                for (int j = 0; j < n; ++j)
                    if (live & (ColourSet{1} << params.colourIndex({i, j}))) level.insert(encode(j, w).substr(0, l));
                trees_.trees[i].levels.push_back(sorted(level));
            }
            for (int j = 0; j < n; ++j) {
                const int c = params.colourIndex({i, j});
                if (live & (ColourSet{1} << c)) paths_[c] = encode(j, w);
            }
        }
    }

    /// Live colours after the event; a reintroduction gives its target the source's branch.
    void advance(ColourSet live, const Reintroduction* r)
    {
        std::map<int, std::string> next;
        int target = -1, source = -1;
        if (r) {
            target = params_.colourIndex({r->coord, r->to});
            source = params_.colourIndex({r->coord, r->from});
        }
        for (int c = 0; c < params_.colourCount(); ++c) {
            if (!(live & (ColourSet{1} << c))) continue;
            auto old = paths_.find(c);
            if (c == target && old == paths_.end()) {
                auto src = paths_.find(source);
                if (src == paths_.end()) throw std::logic_error("reintroduced from a dead colour");
                next[c] = src->second + "1";
            } else if (old != paths_.end()) {
                next[c] = old->second + "0";
            } else {
                throw std::logic_error("colour appeared without a reintroduction");
            }
        }
        paths_ = std::move(next);
        std::vector<std::set<std::string>> levels(params_.coords());
        for (auto& [c, p] : paths_) levels[params_.colourAt(c).coord].insert(p);
        for (int i = 0; i < params_.coords(); ++i) trees_.trees[i].levels.push_back(sorted(levels[i]));
    }

    const std::string& path(int colour) const { return paths_.at(colour); }
    const FactorTrees& trees() const { return trees_; }

private:
    const GameParams& params_;
    std::map<int, std::string> paths_;
    FactorTrees trees_;
};

} // namespace

// ---------------------------------------------------------------------------
// LevelTree

bool LevelTree::contains(const std::string& v) const
{
    if (v.size() >= levels.size()) return false;
    const auto& l = levels[v.size()];
    return std::binary_search(l.begin(), l.end(), v);
}

std::vector<std::string> LevelTree::children(const std::string& v) const
{
    std::vector<std::string> out;
    for (char c : {'0', '1'})
        if (contains(v + c)) out.push_back(v + c);
    return out;
}

std::string LevelTree::check(int bound) const
{
    if (levels.empty() || levels[0] != std::vector<std::string>{""}) return "level 0 must be the root alone";
    for (std::size_t s = 1; s < levels.size(); ++s) {
        const auto& l = levels[s];
        const std::string where = "level " + std::to_string(s) + ": ";
        if (l.empty()) return where + "no vertices";
        if (static_cast<int>(l.size()) > bound)
            return where + std::to_string(l.size()) + " vertices exceed the bound " + std::to_string(bound);
        if (!std::is_sorted(l.begin(), l.end()) || std::adjacent_find(l.begin(), l.end()) != l.end())
            return where + "vertices not sorted and distinct";
        for (const auto& v : l) {
            if (v.size() != s || v.find_first_not_of("01") != std::string::npos)
                return where + "bad vertex \"" + v + "\"";
            const auto& prev = levels[s - 1];
            if (!std::binary_search(prev.begin(), prev.end(), v.substr(0, s - 1)))
                return where + "vertex \"" + v + "\" has no parent";
        }
    }
    return {};
}

LevelTree LevelTree::from_json(const nlohmann::json& j)
{
    LevelTree t;
    try {
        for (const auto& level : j.at("levels")) {
            std::set<std::string> l;
            for (const auto& v : level) l.insert(v.get<std::string>());
            t.levels.push_back(sorted(l));
        }
    } catch (const nlohmann::json::exception& e) {
        throw WitnessError(std::string("bad level tree: ") + e.what());
    }
    return t;
}

nlohmann::json to_json(const LevelTree& tree)
{
    return {{"levels", tree.levels}};
}

nlohmann::json to_json(const FactorTrees& trees)
{
    auto out = nlohmann::json::array();
    for (const auto& t : trees.trees) out.push_back(to_json(t));
    return out;
}

LevelTree random_level_tree(int bound, int depth, std::mt19937_64& rng)
{
    if (bound < 1 || depth < 0) throw WitnessError("bad random tree parameters");
    LevelTree t;
    t.levels.push_back({""});
    std::discrete_distribution<int> kids({2, 6, 2});
    for (int s = 0; s < depth; ++s) {
        const auto& cur = t.levels.back();
        std::vector<int> count(cur.size());
        for (auto& c : count) c = kids(rng);
        auto total = [&] { return std::accumulate(count.begin(), count.end(), 0); };
        std::uniform_int_distribution<std::size_t> pick(0, cur.size() - 1);
        if (total() == 0) count[pick(rng)] = 1;
        while (total() > bound) {
            auto i = pick(rng);
            if (count[i] == 2) --count[i];
            else if (count[i] == 1 && std::count(count.begin(), count.end(), 2) == 0 && total() > 1) --count[i];
        }
        std::set<std::string> next;
        for (std::size_t i = 0; i < cur.size(); ++i) {
            if (count[i] == 2) {
                next.insert(cur[i] + "0");
                next.insert(cur[i] + "1");
            } else if (count[i] == 1) {
                next.insert(cur[i] + (rng() & 1 ? "1" : "0"));
            }
        }
        t.levels.push_back(sorted(next));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Player 2 strategy -> reduction

ReductionWitness p2_to_reduction(const SolveResult& strategy, const LevelTree& input, int depth)
{
    const auto& params = strategy.params;
    const auto& rules = strategy.config.rules;
    if (strategy.winner != Player::P2) throw WitnessError("expected a Player 2 strategy");
    if (depth < 0) throw WitnessError("negative depth");
    if (input.depth() < depth)
        throw WitnessError("input tree has " + std::to_string(input.depth()) + " levels, fewer than the depth");
    LevelTree prefix{{input.levels.begin(), input.levels.begin() + depth + 1}};
    if (auto err = prefix.check(params.k()); !err.empty()) throw WitnessError("input tree rejected: " + err);

    const SymmetryGroup group(params, rules.adjacency, strategy.config.symmetry);
    ReductionWitness w;
    Position pos = apply_move(params, rules, root_position(), ChooseBoxes{1});
    w.trace.push_back("choose 1 box for the root");
    {
        auto m = require_move(strategy, group, pos);
        pos = apply_move(params, rules, pos, m);
        w.trace.push_back(to_string(params, m));
    }
    if (pos.phase != Phase::P1ToMove) throw std::logic_error("strategy loses at the distribution");
    ColourPaths paths(params, params.coloursIn(pos.board.tokens()));
    w.boxVertex = {""};

    // one Player 2 response, with every reintroduction as its own event
    auto respond = [&](const std::string& what) {
        const auto m = require_move(strategy, group, pos);
        w.trace.push_back(what + ": " + to_string(params, m));
        if (const auto* chain = chain_of(m)) {
            Board board = pos.board;
            for (const auto& r : *chain) {
                board = reintroduce(params, rules, board, r);
                paths.advance(params.coloursIn(board.tokens()), &r);
            }
        }
        pos = apply_move(params, rules, pos, m);
        paths.advance(params.coloursIn(pos.board.tokens()), nullptr);
        if (pos.phase != Phase::P1ToMove)
            throw std::logic_error("strategy reached " + std::string(to_string(pos.phase)) + " after " + what);
    };
    auto boxOf = [&](const std::string& v) {
        auto it = std::find(w.boxVertex.begin(), w.boxVertex.end(), v);
        if (it == w.boxVertex.end()) throw std::logic_error("no box for vertex " + v);
        return static_cast<int>(it - w.boxVertex.begin());
    };

    for (int s = 0; s < depth; ++s) {
        const std::string level = "level " + std::to_string(s + 1);
        for (const auto& v : input.levels[s]) {
            if (!input.children(v).empty()) continue;
            const int b = boxOf(v);
            pos = apply_move(params, rules, pos, Tap{b});
            w.boxVertex.erase(w.boxVertex.begin() + b);
            respond(level + ": tap box " + std::to_string(b) + " (vertex \"" + v + "\")");
        }
        for (const auto& v : input.levels[s]) {
            const auto kids = input.children(v);
            if (kids.size() != 2) continue;
            const int b = boxOf(v);
            pos = apply_move(params, rules, pos, SplitBox{b});
            respond(level + ": split box " + std::to_string(b) + " (vertex \"" + v + "\")");
            w.boxVertex[b] = kids[0];
            w.boxVertex.push_back(kids[1]);
        }
        for (auto& v : w.boxVertex) {
            if (v.size() != static_cast<std::size_t>(s)) continue;
            v = input.children(v).at(0);
        }
    }

    w.finalPosition = pos;
    w.factorTrees = paths.trees();
    for (int b = 0; b < static_cast<int>(pos.board.boxes.size()); ++b) {
        for (int t = 0; t < params.tokenCount(); ++t) {
            if (!(pos.board.boxes[b] & (TokenSet{1} << t))) continue;
            OuterEntry e{t, {}, b, w.boxVertex[b]};
            for (int i = 0; i < params.coords(); ++i)
                e.colourPaths.push_back(paths.path(params.colourIndex({i, params.tokenValue(t, i)})));
            w.outer.push_back(std::move(e));
        }
    }
    return w;
}

std::optional<std::string> outer_map(const ReductionWitness& w, const std::vector<std::string>& paths)
{
    for (const auto& e : w.outer) {
        if (e.colourPaths.size() != paths.size()) continue;
        bool match = true;
        for (std::size_t i = 0; i < paths.size() && match; ++i) match = is_prefix(e.colourPaths[i], paths[i]);
        if (match) return e.inputVertex;
    }
    return std::nullopt;
}

std::vector<std::string> check_reduction(const GameParams& params, const LevelTree& input, int depth,
                                         const ReductionWitness& w)
{
    std::vector<std::string> bad;
    for (int i = 0; i < params.coords(); ++i) {
        if (i >= static_cast<int>(w.factorTrees.trees.size())) {
            bad.push_back("missing factor tree " + std::to_string(i));
            continue;
        }
        if (auto err = w.factorTrees.trees[i].check(params.factors()[i]); !err.empty())
            bad.push_back("factor tree " + std::to_string(i) + ": " + err);
    }
    const auto& deepest = input.levels.at(depth);
    std::vector<std::string> boxes = w.boxVertex;
    std::sort(boxes.begin(), boxes.end());
    if (boxes != deepest) bad.push_back("boxes do not match the deepest input level");
    if (w.outer.empty()) bad.push_back("no surviving token");
    for (const auto& e : w.outer) {
        const std::string who = "token " + std::to_string(e.token) + ": ";
        if (!std::binary_search(deepest.begin(), deepest.end(), e.inputVertex))
            bad.push_back(who + "vertex \"" + e.inputVertex + "\" not on the deepest input level");
        if (e.box >= static_cast<int>(w.finalPosition.board.boxes.size()) ||
            !(w.finalPosition.board.boxes[e.box] & (TokenSet{1} << e.token)))
            bad.push_back(who + "not in its box");
        for (std::size_t i = 0; i < e.colourPaths.size() && i < w.factorTrees.trees.size(); ++i) {
            const auto& last = w.factorTrees.trees[i].levels.back();
            if (!std::binary_search(last.begin(), last.end(), e.colourPaths[i]))
                bad.push_back(who + "colour path in tree " + std::to_string(i) + " is dead");
        }
    }
    return bad;
}

nlohmann::json to_json(const ReductionWitness& w)
{
    auto outer = nlohmann::json::array();
    for (const auto& e : w.outer)
        outer.push_back({{"token", e.token}, {"paths", e.colourPaths}, {"box", e.box}, {"vertex", e.inputVertex}});
    return {{"factorTrees", to_json(w.factorTrees)}, {"outer", outer}, {"trace", w.trace}, {"boxes", w.boxVertex}};
}

// ---------------------------------------------------------------------------
// Player 1 strategy -> adversary

void OpponentModel::validate(const GameParams& params) const
{
    for (const auto& [count, boxes] : distributions) {
        const std::string where = "distribution for " + std::to_string(count) + " boxes: ";
        if (count < 1 || count > params.k()) throw WitnessError(where + "box count out of range");
        if (static_cast<int>(boxes.size()) != count) throw WitnessError(where + "wrong number of boxes");
        std::vector<int> seen(params.tokenCount(), -1);
        for (int b = 0; b < count; ++b) {
            for (int t : boxes[b]) {
                if (t < 0 || t >= params.tokenCount()) throw WitnessError(where + "token " + std::to_string(t) + " out of range");
                if (seen[t] >= 0)
                    throw WitnessError(where + "token " + std::to_string(t) + " in boxes " + std::to_string(seen[t]) +
                                       " and " + std::to_string(b));
                seen[t] = b;
            }
        }
        for (int t = 0; t < params.tokenCount(); ++t)
            if (seen[t] < 0) throw WitnessError(where + "token " + std::to_string(t) + " in no box");
    }
}

OpponentModel OpponentModel::from_json(const nlohmann::json& j)
{
    OpponentModel m;
    try {
        m.seed = j.value("seed", std::uint64_t{0});
        if (j.contains("distributions"))
            for (const auto& [count, boxes] : j.at("distributions").items())
                m.distributions[std::stoi(count)] = boxes.get<std::vector<std::vector<int>>>();
    } catch (const std::exception& e) {
        throw WitnessError(std::string("bad opponent model: ") + e.what());
    }
    return m;
}

nlohmann::json to_json(const OpponentModel& m)
{
    nlohmann::json d = nlohmann::json::object();
    for (const auto& [count, boxes] : m.distributions) d[std::to_string(count)] = boxes;
    return {{"distributions", d}, {"seed", m.seed}};
}

OpponentModel random_opponent(const GameParams& params, std::mt19937_64& rng)
{
    OpponentModel m;
    m.seed = rng();
    for (int count = 1; count <= params.k(); ++count) {
        if (rng() % 4 == 0) continue; // left to the policy
        std::vector<std::vector<int>> boxes(count);
        std::uniform_int_distribution<int> pick(0, count - 1);
        for (int t = 0; t < params.tokenCount(); ++t) boxes[pick(rng)].push_back(t);
        m.distributions[count] = std::move(boxes);
    }
    return m;
}

AdversaryResult p1_to_adversary(const SolveResult& strategy, const OpponentModel& opponent, int depth)
{
    const auto& params = strategy.params;
    const auto& rules = strategy.config.rules;
    if (strategy.winner != Player::P1) throw WitnessError("expected a Player 1 strategy");
    if (depth < 0) throw WitnessError("negative depth");
    opponent.validate(params);

    const SymmetryGroup group(params, rules.adjacency, strategy.config.symmetry);
    std::mt19937_64 rng(opponent.seed);
    AdversaryResult r;
    r.tree.levels.push_back({""});

    Position pos = root_position();
    const auto choose = require_move(strategy, group, pos);
    const int count = std::get<ChooseBoxes>(choose).count;
    pos = apply_move(params, rules, pos, choose);
    r.trace.push_back("choose " + std::to_string(count) + " boxes");

    Board board;
    board.boxes.assign(count, 0);
    if (auto it = opponent.distributions.find(count); it != opponent.distributions.end()) {
        for (int b = 0; b < count; ++b)
            for (int t : it->second[b]) board.boxes[b] |= TokenSet{1} << t;
    } else {
        std::uniform_int_distribution<int> pick(0, count - 1);
        for (int t = 0; t < params.tokenCount(); ++t) board.boxes[pick(rng)] |= TokenSet{1} << t;
    }
    const Move distribute = DistributeTokens{board};
    pos = apply_move(params, rules, pos, distribute);
    r.trace.push_back("opponent " + to_string(params, distribute));

    const int width = bit_width_for(count);
    for (int l = 1; l <= width; ++l) {
        std::set<std::string> level;
        for (int b = 0; b < count; ++b) level.insert(encode(b, width).substr(0, l));
        r.tree.levels.push_back(sorted(level));
    }
    for (int b = 0; b < count; ++b) r.boxVertex.push_back(encode(b, width));

    for (int moves = 0; pos.phase == Phase::P1ToMove && moves < depth; ++moves) {
        const auto m = require_move(strategy, group, pos);
        r.trace.push_back("tree level " + std::to_string(r.tree.levels.size()) + ": " + to_string(params, m));
        std::set<std::string> level;
        if (auto* tap = std::get_if<Tap>(&m)) {
            r.boxVertex.erase(r.boxVertex.begin() + tap->box);
            for (auto& v : r.boxVertex) v += "0";
        } else if (auto* split = std::get_if<SplitBox>(&m)) {
            const auto v = r.boxVertex[split->box];
            for (auto& u : r.boxVertex) u += "0";
            r.boxVertex.push_back(v + "1");
        } else {
            throw std::logic_error("unexpected Player 1 move");
        }
        r.tree.levels.push_back(sorted({r.boxVertex.begin(), r.boxVertex.end()}));
        pos = apply_move(params, rules, pos, m);

        auto options = successors(params, rules, pos);
        if (options.empty()) throw std::logic_error("opponent has no legal response");
        std::uniform_int_distribution<std::size_t> pick(0, options.size() - 1);
        auto& [reply, next] = options[pick(rng)];
        r.trace.push_back("opponent responds " + to_string(params, reply));
        pos = std::move(next);
    }

    r.finalPosition = pos;
    if (pos.phase == Phase::TerminalP1Win) {
        r.decided = true;
        for (int b = 0; b < static_cast<int>(pos.board.boxes.size()); ++b) {
            if (pos.board.boxes[b] == 0) {
                r.emptyBox = b;
                break;
            }
        }
        r.survivingPath = r.boxVertex[r.emptyBox] + "0";
        r.tree.levels.push_back({r.survivingPath});
        r.trace.push_back("box " + std::to_string(r.emptyBox) + " is empty; only \"" + r.survivingPath + "\" survives");
    } else if (pos.phase == Phase::TerminalP2Win) {
        throw std::logic_error("Player 1 strategy lost all boxes");
    } else {
        r.trace.push_back("undecided at depth " + std::to_string(depth));
    }
    return r;
}

std::vector<std::string> check_adversary(const GameParams& params, const AdversaryResult& r)
{
    std::vector<std::string> bad;
    if (auto err = r.tree.check(params.k()); !err.empty()) bad.push_back("tree: " + err);
    const auto& boxes = r.finalPosition.board.boxes;
    if (boxes.size() != r.boxVertex.size()) bad.push_back("box bookkeeping out of step");
    if (!r.decided) {
        if (r.finalPosition.terminal()) bad.push_back("terminal play reported undecided");
        return bad;
    }
    if (r.emptyBox < 0 || r.emptyBox >= static_cast<int>(boxes.size()) || boxes[r.emptyBox] != 0)
        bad.push_back("no empty box");
    if (r.tree.levels.back() != std::vector<std::string>{r.survivingPath})
        bad.push_back("last level is not the surviving path alone");
    for (std::size_t b = 0; b < boxes.size() && b < r.boxVertex.size(); ++b) {
        if (boxes[b] == 0) continue;
        // every token the opponent could select sits in a box whose vertex died
        if (is_prefix(r.boxVertex[b], r.survivingPath))
            bad.push_back("box " + std::to_string(b) + " still holds tokens on the surviving path");
    }
    return bad;
}

nlohmann::json to_json(const AdversaryResult& r)
{
    nlohmann::json j = {{"tree", to_json(r.tree)}, {"decided", r.decided}, {"trace", r.trace}, {"boxes", r.boxVertex}};
    if (r.decided) {
        j["emptyBox"] = r.emptyBox;
        j["survivingPath"] = r.survivingPath;
    } else {
        j["marker"] = "no empty box yet";
    }
    return j;
}

} // namespace wgl
