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

#include "wgl/sort_ops.hpp"

#include <algorithm>
#include <map>

namespace wgl {

namespace {

bool is_prefix(const std::string& p, const std::string& s)
{
    return p.size() <= s.size() && std::equal(p.begin(), p.end(), s.begin());
}

bool comparable(const std::string& a, const std::string& b)
{
    return is_prefix(a, b) || is_prefix(b, a);
}

bool seq_prefix(const std::vector<int>& p, const std::vector<int>& s)
{
    return p.size() <= s.size() && std::equal(p.begin(), p.end(), s.begin());
}

std::string digits(const std::vector<int>& v)
{
    std::string s;
    for (int x : v) s += static_cast<char>('0' + x);
    return s;
}

std::string show(const std::string& node)
{
    return "\"" + node + "\"";
}

} // namespace

// ---------------------------------------------------------------------------
// MonotoneTable

void MonotoneTable::validate(int k) const
{
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        const std::string where = "entry " + std::to_string(i) + ": ";
        for (int x : e.input)
            if (x < 0 || x >= k) throw TableError(where + "input symbol outside the alphabet");
        if (e.tail < -1 || e.tail >= k) throw TableError(where + "tail symbol outside the alphabet");
        if (e.output.find_first_not_of("01") != std::string::npos) throw TableError(where + "output is not binary");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        for (std::size_t j = 0; j < entries_.size(); ++j) {
            if (i == j) continue;
            const auto& a = entries_[i];
            const auto& b = entries_[j];
            // some query matches both exactly when the inputs are comparable
            // and the tail restrictions agree
            if (!seq_prefix(a.input, b.input)) continue;
            if (a.tail >= 0 && b.tail >= 0 && a.tail != b.tail) continue;
            if (!comparable(a.output, b.output))
                throw TableError("entries " + std::to_string(i) + " and " + std::to_string(j) +
                                 " answer a common query inconsistently");
            if (a.tail == -1 || a.tail == b.tail) {
                if (b.output.size() < a.output.size())
                    throw TableError("entry " + std::to_string(j) + " extends the input of entry " + std::to_string(i) +
                                     " but shortens its output");
            }
        }
    }
}

std::string MonotoneTable::query(const std::vector<int>& prefix, int tail, std::size_t budget) const
{
    std::string best;
    const std::size_t n = std::min(budget, entries_.size());
    for (std::size_t i = 0; i < n; ++i) {
        const auto& e = entries_[i];
        if (e.tail >= 0 && e.tail != tail) continue;
        bool match = true;
        for (std::size_t j = 0; j < e.input.size() && match; ++j)
            match = e.input[j] == (j < prefix.size() ? prefix[j] : tail);
        if (match && e.output.size() > best.size()) best = e.output;
    }
    return best;
}

MonotoneTable MonotoneTable::from_json(const nlohmann::json& j)
{
    std::vector<PhiEntry> entries;
    try {
        for (const auto& item : j) {
            PhiEntry e;
            for (char c : item.at("input").get<std::string>()) {
                if (c < '0' || c > '9') throw TableError(std::string("bad input symbol ") + c);
                e.input.push_back(c - '0');
            }
            e.tail = item.value("tail", -1);
            e.output = item.at("output").get<std::string>();
            entries.push_back(std::move(e));
        }
    } catch (const nlohmann::json::exception& e) {
        throw TableError(std::string("bad table: ") + e.what());
    }
    return MonotoneTable(std::move(entries));
}

nlohmann::json MonotoneTable::to_json() const
{
    auto out = nlohmann::json::array();
    for (const auto& e : entries_) out.push_back({{"input", digits(e.input)}, {"tail", e.tail}, {"output", e.output}});
    return out;
}

MonotoneTable random_table(int k, std::size_t count, std::mt19937_64& rng)
{
    if (k < 1) throw TableError("alphabet must be non-empty");
    std::map<std::vector<int>, std::string> chunk;
    std::bernoulli_distribution one(0.2);
    std::uniform_int_distribution<int> chunkLen(0, 2);
    auto chunkOf = [&](const std::vector<int>& node) -> const std::string& {
        auto [it, fresh] = chunk.try_emplace(node);
        if (fresh)
            for (int i = chunkLen(rng); i > 0; --i) it->second += one(rng) ? '1' : '0';
        return it->second;
    };
    std::uniform_int_distribution<int> len(0, 8);
    std::uniform_int_distribution<int> sym(0, k - 1);
    std::vector<PhiEntry> entries;
    for (std::size_t n = 0; n < count; ++n) {
        // sorted inputs, the only shape the construction ever queries
        std::vector<int> input(len(rng));
        for (auto& x : input) x = sym(rng);
        std::sort(input.begin(), input.end());
        PhiEntry e{input, -1, chunkOf({})};
        for (std::size_t i = 1; i <= input.size(); ++i) e.output += chunkOf({input.begin(), input.begin() + i});
        entries.push_back(std::move(e));
    }
    return MonotoneTable(std::move(entries));
}

// ---------------------------------------------------------------------------
// stage construction

const char* to_string(Action a)
{
    switch (a) {
    case Action::Init: return "init";
    case Action::Found: return "2a";
    case Action::NotFound: return "2b";
    case Action::Diagonalize: return "3a";
    case Action::Wait: return "3b";
    case Action::Keep: return "keep";
    }
    return "?";
}

std::set<std::string> extendible(const std::set<std::string>& tree, int height)
{
    std::set<std::string> out;
    for (const auto& v : tree)
        if (static_cast<int>(v.size()) == height)
            for (std::size_t l = 0; l <= v.size(); ++l) out.insert(v.substr(0, l));
    return out;
}

namespace {

std::vector<std::vector<int>> partial_sorts(int k, const std::vector<int>& alpha, int length)
{
    std::vector<int> prefix(alpha.begin(), alpha.begin() + length);
    std::vector<std::vector<int>> out;
    for (int u = 0; u < k; ++u) out.push_back(u_partial_sort(prefix, u));
    return out;
}

} // namespace

ConstructionState run_stages(int k, const std::vector<int>& alpha, const MonotoneTable& phi, int stages)
{
    if (k < 1) throw TableError("alphabet must be non-empty");
    if (stages < 0 || stages > static_cast<int>(alpha.size()))
        throw TableError("stage count must lie between 0 and the length of alpha");
    for (int x : alpha)
        if (x < 0 || x >= k) throw TableError("alpha leaves the alphabet");
    phi.validate(k);

    ConstructionState cs{k, alpha, phi, {}};
    StageRecord cur;
    cur.tree = {""};
    cur.state.assign(k, 0);
    cur.rho.assign(k, std::nullopt);
    cur.rho[0] = "";
    cur.partialSorts = partial_sorts(k, alpha, 0);
    cs.history.push_back(cur);

    for (int s = 0; s < stages; ++s) {
        const auto ext = extendible(cur.tree, s);
        std::vector<std::string> leaves; // lexicographic order is left to right
        for (const auto& v : cur.tree)
            if (static_cast<int>(v.size()) == s) leaves.push_back(v);

        StageRecord next = cur;
        next.stage = s + 1;
        next.errors.clear();
        next.actions.assign(k, Action::Keep);
        next.partialSorts = partial_sorts(k, alpha, s + 1);

        auto injure = [&](int u) {
            for (int v = u + 1; v < k; ++v) {
                next.state[v] = 0;
                next.rho[v].reset();
            }
        };

        for (int u = 0; u < k; ++u) {
            const auto& sorted = cur.partialSorts[u];
            if (next.partialSorts[u] != sorted) {
                next.state[u] = 0;
                next.rho[u].reset();
                next.actions[u] = Action::Init;
                continue;
            }
            const std::string out = phi.query(sorted, u, static_cast<std::size_t>(s));
            if (cur.state[u] == 0) {
                bool ok = ext.count(out) > 0;
                for (int v = 0; v < u && ok; ++v)
                    if (cur.rho[v] && is_prefix(out, *cur.rho[v])) ok = false;
                if (!ok) {
                    next.actions[u] = Action::NotFound;
                    continue;
                }
                auto leaf = std::find_if(leaves.begin(), leaves.end(), [&](const auto& l) { return is_prefix(out, l); });
                next.rho[u] = *leaf;
                next.state[u] = 1;
                next.actions[u] = Action::Found;
                injure(u);
                break;
            }
            if (cur.state[u] == 1) {
                const auto& r = *cur.rho[u];
                int hit = -1;
                for (int i = 0; i < 2 && hit < 0; ++i)
                    if (ext.count(out) && is_prefix(r + static_cast<char>('0' + i), out)) hit = i;
                if (hit < 0) {
                    next.actions[u] = Action::Wait;
                    continue;
                }
                next.rho[u] = r + static_cast<char>('0' + (1 - hit));
                next.state[u] = 2;
                next.actions[u] = Action::Diagonalize;
                injure(u);
                break;
            }
        }

        // the tree T*_{s+1} and its leaves
        std::set<std::string> seeds;
        for (int u = 0; u < k; ++u) {
            if (next.state[u] == 1 && next.rho[u]) {
                seeds.insert(*next.rho[u] + "0");
                seeds.insert(*next.rho[u] + "1");
            } else if (next.state[u] == 2 && next.rho[u]) {
                seeds.insert(*next.rho[u]);
            }
        }
        std::vector<std::string> starLeaves;
        for (const auto& x : seeds) {
            bool leaf = std::none_of(seeds.begin(), seeds.end(),
                                     [&](const auto& y) { return y.size() > x.size() && is_prefix(x, y); });
            if (leaf) starLeaves.push_back(x);
        }
        for (const auto& rho : starLeaves) {
            if (static_cast<int>(rho.size()) == s + 1) {
                next.tree.insert(rho);
                continue;
            }
            auto leaf = std::find_if(leaves.begin(), leaves.end(), [&](const auto& l) { return is_prefix(rho, l); });
            if (leaf == leaves.end()) {
                next.errors.push_back("leaf " + show(rho) + " of T* is not extendible");
                continue;
            }
            next.tree.insert(*leaf + "0");
        }
        cs.history.push_back(next);
        cur = std::move(next);
    }
    return cs;
}

// ---------------------------------------------------------------------------
// checking

InvariantReport check_invariants(const ConstructionState& cs, int k)
{
    InvariantReport rep;
    auto fail = [&](int stage, const std::string& what) {
        rep.violations.push_back("stage " + std::to_string(stage) + ": " + what);
    };
    for (std::size_t s = 0; s < cs.history.size(); ++s) {
        const auto& rec = cs.history[s];
        const int h = static_cast<int>(s);
        for (const auto& e : rec.errors) fail(h, e);

        // (I)
        std::size_t top = 0;
        for (const auto& v : rec.tree) {
            if (static_cast<int>(v.size()) > h) fail(h, "node " + show(v) + " above the height");
            if (static_cast<int>(v.size()) == h) ++top;
            if (!v.empty() && !rec.tree.count(v.substr(0, v.size() - 1))) fail(h, "node " + show(v) + " has no parent");
        }
        if (top < 1 || top > static_cast<std::size_t>(k) + 1)
            fail(h, std::to_string(top) + " extendible leaves, expected 1.." + std::to_string(k + 1));

        const auto ext = extendible(rec.tree, h);
        for (int u = 0; u < k; ++u) {
            const auto& r = rec.rho[u];
            const std::string who = "strategy " + std::to_string(u) + ": ";
            if (r && !ext.count(*r)) fail(h, who + "marker " + show(*r) + " not extendible");
            if (rec.state[u] == 1 && (!r || !ext.count(*r + "0") || !ext.count(*r + "1")))
                fail(h, who + "state 1 without two extendible children");
            if (rec.state[u] == 2 && !r) fail(h, who + "state 2 without a marker");
            if (rec.state[u] == 0 && r && !(u == 0 && s == 0)) fail(h, who + "state 0 with a marker");
        }

        // every branching extendible node is a marker
        for (const auto& v : ext) {
            if (!ext.count(v + "0") || !ext.count(v + "1")) continue;
            bool marker = std::any_of(rec.rho.begin(), rec.rho.end(), [&](const auto& r) { return r && *r == v; });
            if (!marker) fail(h, "branching node " + show(v) + " is no marker");
        }

        if (s == 0) continue;
        const auto& prev = cs.history[s - 1];

        // (II)
        for (const auto& v : rec.tree) {
            if (prev.tree.count(v)) continue;
            if (static_cast<int>(v.size()) != h) fail(h, "new node " + show(v) + " has the wrong length");
            else if (!prev.tree.count(v.substr(0, h - 1))) fail(h, "new node " + show(v) + " extends no leaf");
        }
        for (const auto& v : prev.tree)
            if (!rec.tree.count(v)) fail(h, "node " + show(v) + " disappeared");

        bool acted = false; // a higher priority strategy ended the stage
        for (int u = 0; u < k; ++u) {
            const std::string who = "strategy " + std::to_string(u) + ": ";
            const bool changed = rec.partialSorts[u] != prev.partialSorts[u];
            const bool init = rec.actions[u] == Action::Init;
            if (init && !changed) fail(h, who + "initialised with an unchanged partial sort");
            if (changed && !init && !acted) fail(h, who + "partial sort changed without initialisation");
            if (acted && rec.actions[u] != Action::Keep) fail(h, who + "ran after the stage ended");

            // priority: an acting strategy leaves nothing below it
            if (rec.actions[u] == Action::Found || rec.actions[u] == Action::Diagonalize) {
                for (int v = u + 1; v < k; ++v)
                    if (rec.state[v] != 0 || rec.rho[v]) fail(h, who + "strategy " + std::to_string(v) + " not injured");
                acted = true;
            }

            if (rec.state[u] == 2) {
                ++rep.diagonalizations;
                const auto out = cs.phi.query(rec.partialSorts[u], u, s);
                if (ext.count(out)) fail(h, who + "output " + show(out) + " still extendible after diagonalizing");
            }
        }
    }
    return rep;
}

nlohmann::json to_json(const ConstructionState& cs)
{
    auto history = nlohmann::json::array();
    for (const auto& rec : cs.history) {
        auto rho = nlohmann::json::array();
        for (const auto& r : rec.rho) rho.push_back(r ? nlohmann::json(*r) : nlohmann::json(nullptr));
        auto actions = nlohmann::json::array();
        for (auto a : rec.actions) actions.push_back(to_string(a));
        history.push_back({{"stage", rec.stage},
                           {"tree", std::vector<std::string>(rec.tree.begin(), rec.tree.end())},
                           {"state", rec.state},
                           {"rho", rho},
                           {"actions", actions},
                           {"errors", rec.errors}});
    }
    return {{"k", cs.k}, {"alpha", digits(cs.alpha)}, {"phi", cs.phi.to_json()}, {"history", history}};
}

} // namespace wgl
