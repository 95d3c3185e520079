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

// Randomised checks of the sort pipelines against naive references. Each
// check returns an empty string on success and a description otherwise.

#include "wgl/sort_ops.hpp"

#include "oracle.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace sortcheck {

using wgl::FinSeq;

inline FinSeq random_finseq(std::mt19937_64& rng, int alphabet, std::size_t maxLen)
{
    std::vector<int> prefix(rng() % (maxLen + 1));
    for (auto& s : prefix) s = static_cast<int>(rng() % alphabet);
    return FinSeq(alphabet, std::move(prefix), static_cast<int>(rng() % alphabet));
}

/// The first `n` symbols of the sequence.
inline std::vector<int> window(const FinSeq& x, std::size_t n)
{
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x.at(i);
    return out;
}

/// Reference sort: symbols below the tail occur finitely often and come
/// first, in order; the tail repeats forever; symbols above it are lost.
inline std::vector<int> reference_sort(const FinSeq& x, std::size_t n)
{
    std::vector<int> below;
    for (int s : x.prefix())
        if (s < x.tail()) below.push_back(s);
    std::sort(below.begin(), below.end());
    below.resize(std::max(n, below.size()), x.tail());
    below.resize(n);
    return below;
}

inline std::string sort_properties(const FinSeq& x)
{
    const auto y = wgl::sort_d(x);
    const std::size_t n = x.prefix().size() + 4;
    const auto w = window(y, n);
    if (w != reference_sort(x, n)) return "sort differs from reference on " + x.str();
    if (!std::is_sorted(w.begin(), w.end())) return "output not monotone for " + x.str();
    for (int s = 0; s < x.tail(); ++s)
        if (std::count(x.prefix().begin(), x.prefix().end(), s) != std::count(y.prefix().begin(), y.prefix().end(), s))
            return "count of " + std::to_string(s) + " not preserved for " + x.str();
    if (!(wgl::sort_d(y) == y)) return "sort not idempotent on " + x.str();
    return {};
}

inline std::string strip_round_trip(const FinSeq& x)
{
    const auto s = wgl::strip_zeros_decrement(x);
    if (s.zeroCount != static_cast<std::size_t>(std::count(x.prefix().begin(), x.prefix().end(), 0)))
        return "wrong zero count for " + x.str();
    std::vector<int> kept;
    for (int v : window(x, x.prefix().size() + 3))
        if (v != 0) kept.push_back(v - 1);
    const auto rest = window(s.rest, kept.size());
    if (rest != kept) return "stripped sequence wrong for " + x.str();
    if (!wgl::same_sequence(wgl::recombine_stripped(s), wgl::sort_d(x))) return "round trip fails for " + x.str();
    return {};
}

inline std::string fcc_sort_agrees(const FinSeq& x)
{
    if (!wgl::same_sequence(wgl::sort_via_fcc(x), wgl::sort_d(x))) return "sort via components differs on " + x.str();
    return {};
}

inline std::string product_agrees(const FinSeq& x)
{
    const int n = x.alphabet() - 1;
    if (n < 1) return {};
    std::vector<FinSeq> sorted;
    for (const auto& part : wgl::product_translate(n, x)) sorted.push_back(wgl::sort_d(part));
    if (!wgl::same_sequence(wgl::product_recombine(sorted), wgl::sort_d(x)))
        return "product recombination differs on " + x.str();
    return {};
}

/// Random graph on up to 9 vertices whose active part has at most `bound`
/// components, bound in 2..4.
inline wgl::GraphInstance random_graph(std::mt19937_64& rng)
{
    for (;;) {
        wgl::GraphInstance g;
        g.size = 1 + static_cast<int>(rng() % 9);
        g.active.assign(g.size, true);
        for (int v = 1; v < g.size; ++v) g.active[v] = rng() % 6 != 0;
        const int edges = static_cast<int>(rng() % (2 * g.size + 1));
        for (int e = 0; e < edges; ++e)
            g.edges.emplace_back(static_cast<int>(rng() % g.size), static_cast<int>(rng() % g.size));
        g.componentBound = 2 + static_cast<int>(rng() % 3);
        auto labels = oracle::components(g.size, g.active, g.edges);
        labels.erase(std::remove(labels.begin(), labels.end(), -1), labels.end());
        std::sort(labels.begin(), labels.end());
        const auto count = std::unique(labels.begin(), labels.end()) - labels.begin();
        if (count <= g.componentBound) return g;
    }
}

/// fcc_to_sort followed by Sort and decoding picks out exactly 0's component.
inline std::string fcc_agrees(const wgl::GraphInstance& g)
{
    const auto label = oracle::components(g.size, g.active, g.edges);
    const auto enc = wgl::fcc_to_sort(g);
    if (enc.sortInput.alphabet() != g.componentBound) return "wrong alphabet for\n" + g.str();
    const auto member = wgl::fcc_decode(g, wgl::sort_d(enc.sortInput));
    for (int v = 0; v < g.size; ++v) {
        const bool expect = g.active[v] && label[v] == label[0];
        if (member[v] != expect) return "vertex " + std::to_string(v) + " misclassified in\n" + g.str();
    }
    return {};
}

/// Random nested stream of intervals on the grid of multiples of 1/grid.
inline std::vector<wgl::Interval> random_nest(std::mt19937_64& rng, std::int64_t grid = 360)
{
    std::int64_t lo = 0, hi = grid;
    std::vector<wgl::Interval> out{{wgl::Rational(0, 1), wgl::Rational(1, 1)}};
    const int stages = 1 + static_cast<int>(rng() % 6);
    for (int s = 1; s < stages; ++s) {
        auto a = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
        auto b = lo + static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
        lo = std::min(a, b);
        hi = std::max(a, b);
        out.push_back({wgl::Rational(lo, grid), wgl::Rational(hi, grid)});
    }
    return out;
}

inline std::string xc1_sound(const std::vector<wgl::Interval>& stream)
{
    const auto enc = wgl::xc1_via_sort(stream);
    const auto out = wgl::xc1_decode(stream, wgl::sort_d(enc.sortInput));
    for (std::size_t s = 0; s < stream.size(); ++s)
        if (!stream[s].contains(out[s]))
            return "approximation " + out[s].str() + " outside stage " + std::to_string(s) + " interval";
    return {};
}

} // namespace sortcheck
