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
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wgl {

/**
 * An eventually-constant sequence prefix . tail^omega over the alphabet
 * {0, .., alphabet-1}.
 */
class FinSeq
{
public:
    FinSeq(int alphabet, std::vector<int> prefix, int tail);

    /// Parses "prefix|tail", e.g. "0110|1". Symbols are single digits.
    static FinSeq parse(int alphabet, std::string_view text);

    int alphabet() const { return alphabet_; }
    const std::vector<int>& prefix() const { return prefix_; }
    int tail() const { return tail_; }
    int at(std::size_t i) const { return i < prefix_.size() ? prefix_[i] : tail_; }

    /// Same sequence with trailing tail symbols dropped from the prefix.
    FinSeq normalized() const;
    std::string str() const;

    friend bool operator==(const FinSeq& a, const FinSeq& b)
    {
        return a.alphabet_ == b.alphabet_ && a.prefix_ == b.prefix_ && a.tail_ == b.tail_;
    }

private:
    int alphabet_;
    std::vector<int> prefix_;
    int tail_;
};

/// Equality as infinite sequences (alphabets may differ).
bool same_sequence(const FinSeq& a, const FinSeq& b);

FinSeq sort_d(const FinSeq& x);

/// 0^{N[eta,0]} 1^{N[eta,1]} ... (u-1)^{N[eta,u-1]}
std::vector<int> u_partial_sort(const std::vector<int>& eta, int u);

struct Stripped
{
    FinSeq rest;
    std::size_t zeroCount = 0;
};

/// Deletes every 0 and decrements the other symbols; requires finitely many 0s.
Stripped strip_zeros_decrement(const FinSeq& x);

/// 0^{zeroCount} followed by sort of `rest` shifted up by one.
FinSeq recombine_stripped(const Stripped& s);

/**
 * A finite graph on vertices 0..size-1 with an activity predicate and an
 * upper bound on the number of connected components among active vertices.
 */
struct GraphInstance
{
    int size = 0;
    std::vector<bool> active;
    std::vector<std::pair<int, int>> edges;
    int componentBound = 1;

    /// Edge-list text: first line "vertices N bound B", then "inactive v"
    /// or "u v" lines; '#' starts a comment.
    static GraphInstance parse(std::string_view text);
    std::string str() const;
};

class GraphError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

struct FccEncoding
{
    /// Input to Sort over the alphabet {0, .., bound-1}; symbol i-2 records a
    /// refuted candidate independent i-set, bound-1 is the filler.
    FinSeq sortInput;
    /// The i-subset index at which each i-counter stopped (i = 2..bound).
    std::vector<std::size_t> counters;
};

FccEncoding fcc_to_sort(const GraphInstance& g);

/// Characteristic function (over all vertices) of the component of vertex 0,
/// computed from the sorted sequence and path searches only.
std::vector<bool> fcc_decode(const GraphInstance& g, const FinSeq& sorted);

/// The m-th i-element subset of the active vertices in lexicographic order.
std::optional<std::vector<int>> nth_subset(const GraphInstance& g, int size, std::size_t m);

/// Binary Sort computed through the bipartite connected-component graph.
FinSeq sort_via_fcc(const FinSeq& x);

/// The graph built for sort_via_fcc over `horizon` time steps.
GraphInstance sort_graph(const FinSeq& x, std::size_t horizon);

/// Component i is the indicator stream of "symbol > i" (0 where the symbol is <= i).
std::vector<FinSeq> product_translate(int n, const FinSeq& x);
/// Rebuilds Sort_{n+1}(x) from the binary sorts of the components.
FinSeq product_recombine(const std::vector<FinSeq>& sortedComponents);

struct Rational
{
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);
    static Rational parse(std::string_view text);
    std::string str() const;
    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.num == b.num && a.den == b.den; }
    friend bool operator<(const Rational& a, const Rational& b);
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
};

Rational midpoint(Rational a, Rational b);

struct Interval
{
    Rational lo;
    Rational hi;
    bool contains(const Rational& q) const { return lo <= q && q <= hi; }
};

/// The i-th rational of [0,1] in the order 0, 1, 1/2, 1/3, 2/3, 1/4, 3/4, ...
Rational enumerate_rational(std::size_t i);

struct Xc1Encoding
{
    FinSeq sortInput;
    std::vector<std::size_t> exclusions; // rational index excluded at each write of 0
};

/// Encodes a nested interval stream (constant after its last entry) as a binary Sort input.
Xc1Encoding xc1_via_sort(const std::vector<Interval>& stream);

/// Output approximation per stream stage, read off the sorted sequence.
std::vector<Rational> xc1_decode(const std::vector<Interval>& stream, const FinSeq& sorted);

} // namespace wgl
