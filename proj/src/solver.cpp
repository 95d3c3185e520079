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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

namespace wgl {

namespace {

using Clock = std::chrono::steady_clock;

std::int64_t millis_since(Clock::time_point start)
{
    return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - start).count();
}

/// Canonical successor keys of a representative, first occurrence order.
std::vector<CanonicalKey> successor_keys(const GameParams& params, const SolverConfig& config,
                                         const SymmetryGroup& group, const Position& rep)
{
    std::vector<CanonicalKey> out;
    std::unordered_set<CanonicalKey, CanonicalKeyHash> seen;
    for (auto& [move, next] : successors(params, config.rules, rep)) {
        auto key = canonical_key(next, group, config.method);
        if (seen.insert(key).second) out.push_back(std::move(key));
    }
    return out;
}

} // namespace

std::optional<std::uint32_t> Arena::find(const CanonicalKey& key) const
{
    auto it = index.find(key);
    if (it == index.end()) return std::nullopt;
    return it->second;
}

Arena build_arena(const GameParams& params, const SolverConfig& config)
{
    const auto start = Clock::now();
    Arena arena{params, config, SymmetryGroup(params, config.rules.adjacency, config.symmetry), {}, {}, {}};

    auto add = [&](CanonicalKey key) -> std::uint32_t {
        auto [it, fresh] = arena.index.try_emplace(key, static_cast<std::uint32_t>(arena.nodes.size()));
        if (fresh) {
            arena.nodes.push_back({std::move(key), {}});
            arena.stats.nodes = arena.nodes.size();
            if (arena.nodes.size() > config.nodeCap)
                throw ResourceError("node cap of " + std::to_string(config.nodeCap) + " exceeded", arena.stats);
        }
        return it->second;
    };
    add(canonical_key(root_position(), arena.group, config.method));

    std::vector<std::uint32_t> frontier{0};
    const int threads = std::max(1, config.threads);
    while (!frontier.empty()) {
        arena.stats.peakFrontier = std::max(arena.stats.peakFrontier, frontier.size());
        std::vector<std::vector<CanonicalKey>> expanded(frontier.size());
        auto work = [&](std::size_t begin, std::size_t stride) {
            for (std::size_t i = begin; i < frontier.size(); i += stride) {
                const auto rep = position_of(arena.nodes[frontier[i]].key);
                if (!rep.terminal()) expanded[i] = successor_keys(params, config, arena.group, rep);
            }
        };
        if (threads == 1 || frontier.size() < 64) {
            work(0, 1);
        } else {
            std::vector<std::jthread> pool;
            for (int t = 0; t < threads; ++t) pool.emplace_back(work, static_cast<std::size_t>(t),
                                                                static_cast<std::size_t>(threads));
        }

        std::vector<std::uint32_t> next;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            std::vector<std::uint32_t> succ;
            succ.reserve(expanded[i].size());
            for (auto& key : expanded[i]) {
                const auto before = arena.nodes.size();
                auto id = add(std::move(key));
                if (arena.nodes.size() > before) next.push_back(id);
                succ.push_back(id);
            }
            arena.stats.edges += succ.size();
            arena.nodes[frontier[i]].succ = std::move(succ);
        }
        arena.stats.millis = millis_since(start);
        if (arena.stats.millis > config.timeCapMillis)
            throw ResourceError("time cap of " + std::to_string(config.timeCapMillis) + " ms exceeded", arena.stats);
        frontier.swap(next);
    }
    arena.stats.millis = millis_since(start);
    return arena;
}

Attractor p1_attractor(const Arena& arena)
{
    const std::size_t n = arena.nodes.size();
    Attractor attr{std::vector<bool>(n, false), std::vector<int>(n, -1)};
    std::vector<std::vector<std::uint32_t>> preds(n);
    std::vector<std::size_t> pending(n, 0);
    for (std::uint32_t v = 0; v < n; ++v) {
        for (auto w : arena.nodes[v].succ) preds[w].push_back(v);
        pending[v] = arena.nodes[v].succ.size();
    }
    std::deque<std::uint32_t> queue;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (arena.isTarget(v)) {
            attr.inside[v] = true;
            attr.rank[v] = 0;
            queue.push_back(v);
        }
    }
    while (!queue.empty()) {
        auto w = queue.front();
        queue.pop_front();
        for (auto v : preds[w]) {
            if (attr.inside[v] || arena.isTerminal(v)) continue;
            // duplicate predecessor entries cannot occur: successor lists are deduplicated
            if (arena.owner(v) == Player::P1 || --pending[v] == 0) {
                attr.inside[v] = true;
                attr.rank[v] = attr.rank[w] + 1;
                queue.push_back(v);
            }
        }
    }
    return attr;
}

std::optional<Move> move_between(const Arena& arena, std::uint32_t from, std::uint32_t to)
{
    const auto rep = position_of(arena.nodes[from].key);
    for (auto& [move, next] : successors(arena.params, arena.config.rules, rep)) {
        if (canonical_key(next, arena.group, arena.config.method) == arena.nodes[to].key) return move;
    }
    return std::nullopt;
}

SolveResult solve(const Arena& arena)
{
    SolveResult result{arena.params, arena.config, Player::P2, {}, arena.stats};
    const auto attr = p1_attractor(arena);
    result.winner = attr.inside[0] ? Player::P1 : Player::P2;
    for (std::uint32_t v = 0; v < arena.nodes.size(); ++v) {
        if (arena.isTerminal(v)) continue;
        const auto owner = arena.owner(v);
        std::optional<std::uint32_t> choice;
        if (result.winner == Player::P1 && owner == Player::P1 && attr.inside[v]) {
            for (auto w : arena.nodes[v].succ)
                if (attr.inside[w] && (!choice || attr.rank[w] < attr.rank[*choice])) choice = w;
        } else if (result.winner == Player::P2 && owner == Player::P2 && !attr.inside[v]) {
            for (auto w : arena.nodes[v].succ) {
                if (!attr.inside[w]) {
                    choice = w;
                    break;
                }
            }
        }
        if (!choice) continue;
        auto move = move_between(arena, v, *choice);
        if (!move) throw std::logic_error("arena edge without a move");
        result.strategy.emplace(arena.nodes[v].key, std::move(*move));
    }
    return result;
}

SolveResult solve(const GameParams& params, const SolverConfig& config)
{
    return solve(build_arena(params, config));
}

namespace {

struct Replay
{
    const SolveResult& result;
    SymmetryGroup group;

    explicit Replay(const SolveResult& r)
        : result(r), group(r.params, r.config.rules.adjacency, r.config.symmetry)
    {
    }

    CanonicalKey key(const Position& pos) const { return canonical_key(pos, group, result.config.method); }

    std::optional<Position> follow(const CanonicalKey& k) const
    {
        auto it = result.strategy.find(k);
        if (it == result.strategy.end()) return std::nullopt;
        try {
            return apply_move(result.params, result.config.rules, position_of(k), it->second);
        } catch (const RuleViolation&) {
            return std::nullopt;
        }
    }

    std::vector<CanonicalKey> children(const CanonicalKey& k) const
    {
        std::vector<CanonicalKey> out;
        for (auto& [m, next] : successors(result.params, result.config.rules, position_of(k))) out.push_back(key(next));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }
};

bool verify_p2(const Replay& replay, std::vector<CanonicalKey>* reach)
{
    std::set<CanonicalKey> seen;
    std::deque<CanonicalKey> queue;
    auto root = replay.key(root_position());
    seen.insert(root);
    queue.push_back(root);
    bool ok = true;
    while (!queue.empty()) {
        auto k = queue.front();
        queue.pop_front();
        if (reach) reach->push_back(k);
        if (k.phase == Phase::TerminalP1Win) {
            ok = false;
            if (!reach) return false;
            continue;
        }
        if (k.phase == Phase::TerminalP2Win) continue;
        std::vector<CanonicalKey> next;
        if (position_of(k).owner() == Player::P1) {
            next = replay.children(k);
        } else {
            auto pos = replay.follow(k);
            if (!pos) {
                ok = false;
                if (!reach) return false;
                continue;
            }
            next.push_back(replay.key(*pos));
        }
        for (auto& n : next)
            if (seen.insert(n).second) queue.push_back(std::move(n));
    }
    return ok;
}

bool verify_p1(const Replay& replay, std::vector<CanonicalKey>* reach)
{
    enum class Mark { Open, Won };
    std::map<CanonicalKey, Mark> marks;
    struct Frame
    {
        CanonicalKey key;
        std::vector<CanonicalKey> children;
        std::size_t next = 0;
    };
    std::vector<Frame> stack;
    bool ok = true;

    auto enter = [&](const CanonicalKey& k) -> bool {
        // returns false when the play fails
        auto it = marks.find(k);
        if (it != marks.end()) return it->second == Mark::Won; // Open: repeated position
        if (reach) reach->push_back(k);
        if (k.phase == Phase::TerminalP1Win) {
            marks[k] = Mark::Won;
            return true;
        }
        if (k.phase == Phase::TerminalP2Win) return false;
        Frame f{k, {}, 0};
        if (position_of(k).owner() == Player::P1) {
            auto pos = replay.follow(k);
            if (!pos) return false;
            f.children.push_back(replay.key(*pos));
        } else {
            f.children = replay.children(k);
        }
        marks[k] = Mark::Open;
        stack.push_back(std::move(f));
        return true;
    };

    if (!enter(replay.key(root_position()))) return false;
    while (!stack.empty()) {
        auto& top = stack.back();
        if (top.next == top.children.size()) {
            marks[top.key] = Mark::Won;
            stack.pop_back();
            continue;
        }
        auto child = top.children[top.next++];
        if (!enter(child)) {
            ok = false;
            break;
        }
    }
    return ok;
}

} // namespace

bool verify_strategy(const SolveResult& result)
{
    Replay replay(result);
    return result.winner == Player::P1 ? verify_p1(replay, nullptr) : verify_p2(replay, nullptr);
}

std::vector<CanonicalKey> strategy_reach(const SolveResult& result)
{
    Replay replay(result);
    std::vector<CanonicalKey> reach;
    if (result.winner == Player::P1)
        verify_p1(replay, &reach);
    else
        verify_p2(replay, &reach);
    return reach;
}

std::optional<Move> strategy_move(const SolveResult& result, const SymmetryGroup& group, const Position& pos)
{
    auto c = canonicalize(pos, group, result.config.method);
    auto it = result.strategy.find(c.key);
    if (it == result.strategy.end()) return std::nullopt;
    return pull_back(it->second, c.transform);
}

const char* to_string(Player p)
{
    return p == Player::P1 ? "P1" : "P2";
}

std::vector<int> canonical_factors(std::vector<int> factors)
{
    std::sort(factors.begin(), factors.end());
    return factors;
}

namespace {

std::string factors_string(const std::vector<int>& f, char sep = ',')
{
    std::string s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) s += sep;
        s += std::to_string(f[i]);
    }
    return s;
}

bool sub_multiset(const std::vector<int>& small, const std::vector<int>& big)
{
    // both sorted
    return small.size() < big.size() && std::includes(big.begin(), big.end(), small.begin(), small.end());
}

} // namespace

std::vector<std::string> monotonicity_flags(const std::vector<SweepRow>& rows)
{
    std::vector<std::string> flags;
    for (const auto& a : rows) {
        if (a.winner != Player::P2) continue;
        for (const auto& b : rows) {
            if (b.winner != Player::P1) continue;
            if (b.factors == a.factors && b.k < a.k) {
                flags.push_back("P2 wins k=" + std::to_string(a.k) + " but P1 wins smaller k=" +
                                std::to_string(b.k) + " for factors " + factors_string(a.factors));
            }
            if (b.k == a.k && sub_multiset(a.factors, b.factors)) {
                flags.push_back("P2 wins factors " + factors_string(a.factors) + " but P1 wins larger factors " +
                                factors_string(b.factors) + " at k=" + std::to_string(a.k));
            }
        }
    }
    return flags;
}

SweepResult sweep(int kMin, int kMax, const std::vector<std::vector<int>>& families, const SolverConfig& config)
{
    SweepResult out;
    std::vector<std::vector<int>> bags;
    for (const auto& f : families) {
        auto c = canonical_factors(f);
        if (std::find(bags.begin(), bags.end(), c) == bags.end()) bags.push_back(c);
    }
    for (const auto& bag : bags) {
        for (int k = kMin; k <= kMax; ++k) {
            SweepRow row;
            row.k = k;
            row.factors = bag;
            try {
                auto result = solve(GameParams(k, bag), config);
                row.winner = result.winner;
                row.stats = result.stats;
                row.verified = verify_strategy(result);
            } catch (const ResourceError& e) {
                row.error = e.what();
                row.stats = e.partial();
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            out.rows.push_back(std::move(row));
        }
    }
    out.monotonicityFlags = monotonicity_flags(out.rows);
    return out;
}

std::vector<FrontierEntry> frontier_report(const std::vector<SweepRow>& rows)
{
    std::vector<FrontierEntry> out;
    for (const auto& row : rows) {
        if (!row.winner) continue;
        if (!std::all_of(row.factors.begin(), row.factors.end(), [](int n) { return n == 2; })) continue;
        const int m = static_cast<int>(row.factors.size());
        for (int shift : {1, 0}) {
            FrontierEntry e;
            e.k = row.k;
            e.factorCount = m;
            e.convention = shift ? "l=count-1" : "l=count";
            e.ell = m - shift;
            e.computed = *row.winner;
            e.p2ClaimApplies = row.k + 1 <= e.ell;
            e.p1ClaimApplies = static_cast<double>(row.k + 1) >= std::ldexp(1.0, e.ell - 1);
            e.consistent = !(e.p2ClaimApplies && e.computed != Player::P2) &&
                           !(e.p1ClaimApplies && e.computed != Player::P1);
            out.push_back(e);
        }
    }
    return out;
}

std::string frontier_report_text(const std::vector<FrontierEntry>& entries)
{
    std::ostringstream os;
    os << "convention   factors  k  computed  'P2 if k+1<=l'  'P1 if k+1>=2^(l-1)'  consistent\n";
    for (const auto& e : entries) {
        os << e.convention << (e.convention.size() < 11 ? std::string(11 - e.convention.size(), ' ') : "") << "  "
           << e.factorCount << "x2      " << e.k << "  " << to_string(e.computed) << "        "
           << (e.p2ClaimApplies ? "applies      " : "-            ") << "   "
           << (e.p1ClaimApplies ? "applies          " : "-                ") << "    "
           << (e.consistent ? "yes" : "NO") << "\n";
    }
    for (const char* conv : {"l=count-1", "l=count"}) {
        int total = 0, good = 0;
        for (const auto& e : entries) {
            if (e.convention != conv) continue;
            ++total;
            good += e.consistent;
        }
        os << conv << ": " << good << "/" << total << " points consistent with both bounds\n";
    }
    return os.str();
}

std::string sweep_csv(const SweepResult& sweep, bool timing)
{
    std::ostringstream os;
    os << "k,factors,winner,nodes,millis\n";
    for (const auto& r : sweep.rows) {
        os << r.k << ",\"" << factors_string(r.factors) << "\"," << (r.winner ? to_string(*r.winner) : "error") << ","
           << r.stats.nodes << "," << (timing ? r.stats.millis : 0) << "\n";
    }
    return os.str();
}

nlohmann::json sweep_json(const SweepResult& sweep, bool timing)
{
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : sweep.rows) {
        nlohmann::json row{{"k", r.k}, {"factors", r.factors}, {"nodes", r.stats.nodes},
                           {"millis", timing ? r.stats.millis : 0}, {"verified", r.verified}};
        row["winner"] = r.winner ? to_string(*r.winner) : "error";
        if (!r.error.empty()) row["error"] = r.error;
        rows.push_back(std::move(row));
    }
    return {{"rows", rows}, {"monotonicity_flags", sweep.monotonicityFlags}};
}

nlohmann::json to_json(const SolveResult& result, bool timing)
{
    nlohmann::json strategy = nlohmann::json::array();
    for (const auto& [key, move] : result.strategy) {
        strategy.push_back({{"position", to_string(result.params, position_of(key))},
                            {"move", to_string(result.params, move)}});
    }
    return {
        {"params", {{"k", result.params.k()}, {"factors", result.params.factors()}}},
        {"winner", to_string(result.winner)},
        {"stats",
         {{"nodes", result.stats.nodes},
          {"edges", result.stats.edges},
          {"peak_frontier", result.stats.peakFrontier},
          {"millis", timing ? result.stats.millis : 0}}},
        {"strategy", strategy},
    };
}

std::string to_dot(const Arena& arena)
{
    const auto attr = p1_attractor(arena);
    std::ostringstream os;
    os << "digraph arena {\n";
    for (std::uint32_t v = 0; v < arena.nodes.size(); ++v) {
        const auto pos = position_of(arena.nodes[v].key);
        std::string shape = arena.isTerminal(v) ? "doublecircle" : (pos.owner() == Player::P1 ? "box" : "ellipse");
        std::string label = to_string(arena.params, pos);
        std::string escaped;
        for (char c : label) {
            if (c == '"') escaped += '\\';
            escaped += c;
        }
        os << "  n" << v << " [label=\"" << escaped << "\", shape=" << shape
           << (attr.inside[v] ? ", color=red" : "") << "];\n";
    }
    for (std::uint32_t v = 0; v < arena.nodes.size(); ++v)
        for (auto w : arena.nodes[v].succ) os << "  n" << v << " -> n" << w << ";\n";
    os << "}\n";
    return os.str();
}

} // namespace wgl
