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

#include "wgl/canonical.hpp"

#include <algorithm>
#include <bit>
#include <numeric>

namespace wgl {

namespace {

template <typename F>
void for_each_bit(std::uint64_t mask, F&& f)
{
    while (mask) {
        int i = std::countr_zero(mask);
        f(i);
        mask &= mask - 1;
    }
}

std::vector<int> identity(int n)
{
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

std::vector<std::vector<int>> all_permutations(int n)
{
    std::vector<std::vector<int>> out;
    auto p = identity(n);
    do out.push_back(p);
    while (std::next_permutation(p.begin(), p.end()));
    return out;
}

bool has_distinguished_box(Phase phase)
{
    return phase == Phase::P2RespondRemove || phase == Phase::P2SplitPhase;
}

} // namespace

SymmetryElement SymmetryElement::make(const GameParams& params, std::vector<int> coordPerm,
                                      std::vector<std::vector<int>> valuePerms)
{
    SymmetryElement g;
    g.coordPerm = std::move(coordPerm);
    g.valuePerms = std::move(valuePerms);
    const int n = params.tokenCount();
    g.tokenPerm.resize(n);
    g.tokenInv.resize(n);
    Token image(params.coords());
    for (int t = 0; t < n; ++t) {
        for (int i = 0; i < params.coords(); ++i)
            image[g.coordPerm[i]] = g.valuePerms[i][params.tokenValue(t, i)];
        int u = params.tokenIndex(image);
        g.tokenPerm[t] = u;
        g.tokenInv[u] = t;
    }
    g.colourPerm.resize(params.colourCount());
    g.colourInv.resize(params.colourCount());
    for (int c = 0; c < params.colourCount(); ++c) {
        Colour col = params.colourAt(c);
        int d = params.colourIndex({g.coordPerm[col.coord], g.valuePerms[col.coord][col.value]});
        g.colourPerm[c] = d;
        g.colourInv[d] = c;
    }
    return g;
}

TokenSet SymmetryElement::mapTokens(TokenSet set) const
{
    TokenSet out = 0;
    for_each_bit(set, [&](int t) { out |= TokenSet{1} << tokenPerm[t]; });
    return out;
}

TokenSet SymmetryElement::unmapTokens(TokenSet set) const
{
    TokenSet out = 0;
    for_each_bit(set, [&](int t) { out |= TokenSet{1} << tokenInv[t]; });
    return out;
}

ColourSet SymmetryElement::mapColours(ColourSet set) const
{
    ColourSet out = 0;
    for_each_bit(set, [&](int c) { out |= ColourSet{1} << colourPerm[c]; });
    return out;
}

ColourSet SymmetryElement::unmapColours(ColourSet set) const
{
    ColourSet out = 0;
    for_each_bit(set, [&](int c) { out |= ColourSet{1} << colourInv[c]; });
    return out;
}

Reintroduction SymmetryElement::map(Reintroduction r) const
{
    const auto& vp = valuePerms[r.coord];
    return {coordPerm[r.coord], vp[r.from], vp[r.to]};
}

Reintroduction SymmetryElement::unmap(Reintroduction r) const
{
    int i = static_cast<int>(std::find(coordPerm.begin(), coordPerm.end(), r.coord) - coordPerm.begin());
    const auto& vp = valuePerms[i];
    int from = static_cast<int>(std::find(vp.begin(), vp.end(), r.from) - vp.begin());
    int to = static_cast<int>(std::find(vp.begin(), vp.end(), r.to) - vp.begin());
    return {i, from, to};
}

SymmetryGroup::SymmetryGroup(const GameParams& params, Adjacency adjacency, bool enabled)
    : params_(params), adjacency_(adjacency), enabled_(enabled)
{
    const int m = params.coords();
    std::vector<std::vector<int>> idValues;
    for (int n : params.factors()) idValues.push_back(identity(n));
    if (!enabled) {
        elements_.push_back(SymmetryElement::make(params, identity(m), idValues));
        return;
    }

    std::vector<std::vector<std::vector<int>>> valueChoices(m);
    for (int i = 0; i < m; ++i) {
        const int n = params.factors()[i];
        if (adjacency == Adjacency::Any) {
            valueChoices[i] = all_permutations(n);
        } else {
            valueChoices[i].push_back(identity(n));
            if (n >= 2) {
                auto rev = identity(n);
                std::reverse(rev.begin(), rev.end());
                valueChoices[i].push_back(rev);
            }
        }
    }

    std::size_t valueCount = 1;
    for (auto& c : valueChoices) valueCount *= c.size();
    for (const auto& cp : all_permutations(m)) {
        bool ok = true;
        for (int i = 0; i < m; ++i) ok = ok && params.factors()[cp[i]] == params.factors()[i];
        if (!ok) continue;
        if (elements_.size() + valueCount > kMaxElements) throw std::length_error("symmetry group too large");
        std::vector<std::size_t> idx(m, 0);
        for (std::size_t step = 0; step < valueCount; ++step) {
            std::vector<std::vector<int>> vps(m);
            for (int i = 0; i < m; ++i) vps[i] = valueChoices[i][idx[i]];
            elements_.push_back(SymmetryElement::make(params, cp, std::move(vps)));
            for (int i = 0; i < m; ++i) {
                if (++idx[i] < valueChoices[i].size()) break;
                idx[i] = 0;
            }
        }
    }
}

const SymmetryElement& SymmetryGroup::random(std::mt19937_64& rng) const
{
    std::uniform_int_distribution<std::size_t> pick(0, elements_.size() - 1);
    return elements_[pick(rng)];
}

std::size_t CanonicalKeyHash::operator()(const CanonicalKey& key) const noexcept
{
    std::uint64_t h = 0x9e3779b97f4a7c15ULL ^ (static_cast<std::uint64_t>(key.phase) << 8) ^
                      static_cast<std::uint64_t>(key.box + 1);
    for (auto b : key.boxes) {
        h ^= b + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h *= 0xff51afd7ed558ccdULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 33));
}

Position apply(const SymmetryElement& g, const std::vector<int>& boxOrder, const Position& pos)
{
    Position out;
    out.phase = pos.phase;
    out.box = pos.box;
    out.board.boxes.reserve(boxOrder.size());
    for (int j : boxOrder) out.board.boxes.push_back(g.mapTokens(pos.board.boxes[j]));
    if (has_distinguished_box(pos.phase))
        out.box = static_cast<int>(std::find(boxOrder.begin(), boxOrder.end(), pos.box) - boxOrder.begin());
    return out;
}

namespace {

/// Image of `pos` under g with boxes normalised; distinguished box first.
void image_under(const SymmetryElement& g, const Position& pos, bool permuteBoxes, std::vector<TokenSet>& boxes,
                 std::vector<int>& order)
{
    const int nb = static_cast<int>(pos.board.boxes.size());
    boxes.resize(nb);
    for (int j = 0; j < nb; ++j) boxes[j] = g.mapTokens(pos.board.boxes[j]);
    order.resize(nb);
    std::iota(order.begin(), order.end(), 0);
    if (!permuteBoxes) return;
    auto first = order.begin();
    if (has_distinguished_box(pos.phase)) {
        std::swap(order[0], order[pos.box]);
        ++first;
    }
    std::sort(first, order.end(), [&](int a, int b) { return boxes[a] < boxes[b] || (boxes[a] == boxes[b] && a < b); });
    std::vector<TokenSet> sorted(nb);
    for (int j = 0; j < nb; ++j) sorted[j] = boxes[order[j]];
    boxes.swap(sorted);
}

struct Best
{
    bool set = false;
    std::vector<TokenSet> boxes;
    std::vector<int> order;
    const SymmetryElement* element = nullptr;
    SymmetryElement owned;
};

void consider(Best& best, const SymmetryElement& g, const Position& pos, bool permuteBoxes, bool own,
              std::vector<TokenSet>& scratch, std::vector<int>& order)
{
    image_under(g, pos, permuteBoxes, scratch, order);
    if (!best.set || scratch < best.boxes) {
        best.set = true;
        best.boxes = scratch;
        best.order = order;
        if (own) {
            best.owned = g;
            best.element = nullptr;
        } else {
            best.element = &g;
        }
    }
}

/**
 * Per-colour invariant: tokens of the colour in the distinguished box, then
 * the sorted per-box counts over the remaining boxes.
 */
std::vector<std::vector<int>> colour_signatures(const GameParams& params, const Position& pos)
{
    const bool dist = has_distinguished_box(pos.phase);
    std::vector<std::vector<int>> sig(params.colourCount());
    for (int c = 0; c < params.colourCount(); ++c) {
        const TokenSet with = params.tokensWith(c);
        std::vector<int> rest;
        int head = -1;
        for (int j = 0; j < static_cast<int>(pos.board.boxes.size()); ++j) {
            int cnt = std::popcount(pos.board.boxes[j] & with);
            if (dist && j == pos.box)
                head = cnt;
            else
                rest.push_back(cnt);
        }
        std::sort(rest.begin(), rest.end());
        sig[c].push_back(head);
        sig[c].insert(sig[c].end(), rest.begin(), rest.end());
    }
    return sig;
}

/// Calls f for every permutation of `items` that only reorders runs of equal `keyOf`.
template <typename T, typename Key, typename F>
void for_each_tie_permutation(std::vector<T> items, Key keyOf, F&& f)
{
    std::stable_sort(items.begin(), items.end(), [&](const T& a, const T& b) { return keyOf(a) < keyOf(b); });
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = 0; i < items.size();) {
        std::size_t j = i;
        while (j < items.size() && keyOf(items[j]) == keyOf(items[i])) ++j;
        runs.emplace_back(i, j);
        i = j;
    }
    // runs start sorted by T; iterate all combinations of run permutations
    for (auto& [a, b] : runs) std::sort(items.begin() + a, items.begin() + b);
    while (true) {
        f(items);
        std::size_t r = 0;
        for (; r < runs.size(); ++r) {
            auto [a, b] = runs[r];
            if (std::next_permutation(items.begin() + a, items.begin() + b)) break;
        }
        if (r == runs.size()) break;
    }
}

void refined_candidates(const GameParams& params, const Position& pos, Best& best)
{
    const int m = params.coords();
    const auto sig = colour_signatures(params, pos);
    auto colourSig = [&](int coord, int value) -> const std::vector<int>& {
        return sig[params.colourIndex({coord, value})];
    };
    std::vector<std::vector<std::vector<int>>> profile(m);
    for (int i = 0; i < m; ++i) {
        for (int v = 0; v < params.factors()[i]; ++v) profile[i].push_back(colourSig(i, v));
        std::sort(profile[i].begin(), profile[i].end());
    }

    // value orderings per coordinate: values sorted by signature, ties in any order
    std::vector<std::vector<std::vector<int>>> valueOrders(m);
    for (int i = 0; i < m; ++i) {
        for_each_tie_permutation(identity(params.factors()[i]), [&](int v) { return colourSig(i, v); },
                                 [&](const std::vector<int>& ordered) {
                                     // ordered[r] = value receiving label r
                                     std::vector<int> perm(ordered.size());
                                     for (std::size_t r = 0; r < ordered.size(); ++r) perm[ordered[r]] = static_cast<int>(r);
                                     valueOrders[i].push_back(std::move(perm));
                                 });
    }

    // coordinate classes by factor; targets keep their positions
    std::vector<std::vector<int>> classes;
    {
        std::vector<int> seen;
        for (int i = 0; i < m; ++i) {
            int n = params.factors()[i];
            auto it = std::find(seen.begin(), seen.end(), n);
            if (it == seen.end()) {
                seen.push_back(n);
                classes.push_back({i});
            } else {
                classes[it - seen.begin()].push_back(i);
            }
        }
    }
    std::vector<std::vector<std::vector<int>>> classAssignments(classes.size());
    for (std::size_t c = 0; c < classes.size(); ++c) {
        for_each_tie_permutation(classes[c], [&](int i) { return profile[i]; },
                                 [&](const std::vector<int>& ordered) { classAssignments[c].push_back(ordered); });
    }

    std::vector<TokenSet> scratch;
    std::vector<int> order;
    std::vector<std::size_t> ci(classes.size(), 0);
    while (true) {
        std::vector<int> coordPerm(m);
        for (std::size_t c = 0; c < classes.size(); ++c) {
            const auto& ordered = classAssignments[c][ci[c]];
            for (std::size_t r = 0; r < ordered.size(); ++r) coordPerm[ordered[r]] = classes[c][r];
        }
        std::vector<std::size_t> vi(m, 0);
        while (true) {
            std::vector<std::vector<int>> vps(m);
            for (int i = 0; i < m; ++i) vps[i] = valueOrders[i][vi[i]];
            auto g = SymmetryElement::make(params, coordPerm, std::move(vps));
            consider(best, g, pos, true, true, scratch, order);
            int i = 0;
            for (; i < m; ++i) {
                if (++vi[i] < valueOrders[i].size()) break;
                vi[i] = 0;
            }
            if (i == m) break;
        }
        std::size_t c = 0;
        for (; c < classes.size(); ++c) {
            if (++ci[c] < classAssignments[c].size()) break;
            ci[c] = 0;
        }
        if (c == classes.size()) break;
    }
}

} // namespace

Canonical canonicalize(const Position& pos, const SymmetryGroup& group, CanonicalMethod method)
{
    Canonical out;
    out.key.phase = pos.phase;
    if (pos.terminal() || pos.phase == Phase::ChooseBoxCount || pos.phase == Phase::Distribute) {
        out.key.box = pos.phase == Phase::Distribute ? pos.box : -1;
        out.rep = position_of(out.key);
        out.transform.element = group.element(0);
        if (!pos.terminal()) {
            out.transform.boxOrder.clear();
        }
        // terminals keep no board; boxOrder is unused
        return out;
    }

    if (method == CanonicalMethod::Auto)
        method = group.enabled() && group.adjacency() == Adjacency::Any ? CanonicalMethod::Refined
                                                                          : CanonicalMethod::Exhaustive;
    if (method == CanonicalMethod::Refined && (!group.enabled() || group.adjacency() != Adjacency::Any))
        method = CanonicalMethod::Exhaustive;

    Best best;
    if (method == CanonicalMethod::Exhaustive) {
        std::vector<TokenSet> scratch;
        std::vector<int> order;
        for (std::size_t i = 0; i < group.size(); ++i)
            consider(best, group.element(i), pos, group.permutesBoxes(), false, scratch, order);
    } else {
        refined_candidates(group.params(), pos, best);
    }

    out.key.box = has_distinguished_box(pos.phase) ? (group.permutesBoxes() ? 0 : pos.box) : -1;
    out.key.boxes = best.boxes;
    out.transform.element = best.element ? *best.element : best.owned;
    out.transform.boxOrder = best.order;
    out.rep = position_of(out.key);
    return out;
}

CanonicalKey canonical_key(const Position& pos, const SymmetryGroup& group, CanonicalMethod method)
{
    return canonicalize(pos, group, method).key;
}

Position position_of(const CanonicalKey& key)
{
    Position pos;
    pos.phase = key.phase;
    pos.box = key.box;
    pos.board.boxes = key.boxes;
    return pos;
}

Move pull_back(const Move& move, const Transform& t)
{
    const auto& g = t.element;
    struct Visitor
    {
        const Transform& t;
        const SymmetryElement& g;
        Move operator()(const ChooseBoxes& m) const { return m; }
        Move operator()(const DistributeTokens& m) const
        {
            DistributeTokens out;
            for (auto b : m.board.boxes) out.board.boxes.push_back(g.unmapTokens(b));
            return out;
        }
        Move operator()(const Tap& m) const { return Tap{t.boxOrder[m.box]}; }
        Move operator()(const SplitBox& m) const { return SplitBox{t.boxOrder[m.box]}; }
        Move operator()(const RemoveResponse& m) const
        {
            RemoveResponse out;
            for (auto r : m.chain) out.chain.push_back(g.unmap(r));
            out.colours = g.unmapColours(m.colours);
            return out;
        }
        Move operator()(const SplitResponse& m) const
        {
            SplitResponse out;
            for (auto r : m.chain) out.chain.push_back(g.unmap(r));
            out.first = g.unmapTokens(m.first);
            return out;
        }
    };
    return std::visit(Visitor{t, g}, move);
}

Move push_forward(const Move& move, const Transform& t)
{
    const auto& g = t.element;
    auto slot = [&](int box) {
        return static_cast<int>(std::find(t.boxOrder.begin(), t.boxOrder.end(), box) - t.boxOrder.begin());
    };
    struct Visitor
    {
        const SymmetryElement& g;
        decltype(slot)& slotOf;
        Move operator()(const ChooseBoxes& m) const { return m; }
        Move operator()(const DistributeTokens& m) const
        {
            DistributeTokens out;
            for (auto b : m.board.boxes) out.board.boxes.push_back(g.mapTokens(b));
            return out;
        }
        Move operator()(const Tap& m) const { return Tap{slotOf(m.box)}; }
        Move operator()(const SplitBox& m) const { return SplitBox{slotOf(m.box)}; }
        Move operator()(const RemoveResponse& m) const
        {
            RemoveResponse out;
            for (auto r : m.chain) out.chain.push_back(g.map(r));
            out.colours = g.mapColours(m.colours);
            return out;
        }
        Move operator()(const SplitResponse& m) const
        {
            SplitResponse out;
            for (auto r : m.chain) out.chain.push_back(g.map(r));
            out.first = g.mapTokens(m.first);
            return out;
        }
    };
    return std::visit(Visitor{g, slot}, move);
}

} // namespace wgl
