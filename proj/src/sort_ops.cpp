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

#include "wgl/sort_ops.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <sstream>

namespace wgl {

FinSeq::FinSeq(int alphabet, std::vector<int> prefix, int tail)
    : alphabet_(alphabet), prefix_(std::move(prefix)), tail_(tail)
{
    if (alphabet_ < 1) throw std::invalid_argument("alphabet size must be at least 1");
    if (tail_ < 0 || tail_ >= alphabet_) throw std::invalid_argument("tail symbol outside the alphabet");
    for (int s : prefix_)
        if (s < 0 || s >= alphabet_) throw std::invalid_argument("prefix symbol outside the alphabet");
}

FinSeq FinSeq::parse(int alphabet, std::string_view text)
{
    auto bar = text.find('|');
    if (bar == std::string_view::npos || text.find('|', bar + 1) != std::string_view::npos)
        throw std::invalid_argument("expected \"prefix|tail\"");
    auto digit = [](char c) {
        if (c < '0' || c > '9') throw std::invalid_argument(std::string("not a symbol: ") + c);
        return c - '0';
    };
    std::vector<int> prefix;
    for (char c : text.substr(0, bar)) prefix.push_back(digit(c));
    auto tail = text.substr(bar + 1);
    if (tail.size() != 1) throw std::invalid_argument("tail must be a single symbol");
    return FinSeq(alphabet, std::move(prefix), digit(tail[0]));
}

FinSeq FinSeq::normalized() const
{
    auto p = prefix_;
    while (!p.empty() && p.back() == tail_) p.pop_back();
    return FinSeq(alphabet_, std::move(p), tail_);
}

std::string FinSeq::str() const
{
    std::string s;
    for (int x : prefix_) s += static_cast<char>('0' + x);
    return s + "|" + static_cast<char>('0' + tail_);
}

bool same_sequence(const FinSeq& a, const FinSeq& b)
{
    auto na = a.normalized();
    auto nb = b.normalized();
    return na.prefix() == nb.prefix() && na.tail() == nb.tail();
}

FinSeq sort_d(const FinSeq& x)
{
    // below the tail every symbol occurs finitely often; the tail symbol is
    // the least one occurring infinitely often
    std::vector<int> out;
    for (int u = 0; u < x.tail(); ++u) {
        auto n = std::count(x.prefix().begin(), x.prefix().end(), u);
        out.insert(out.end(), static_cast<std::size_t>(n), u);
    }
    return FinSeq(x.alphabet(), std::move(out), x.tail());
}

std::vector<int> u_partial_sort(const std::vector<int>& eta, int u)
{
    std::vector<int> out;
    for (int v = 0; v < u; ++v) {
        auto n = std::count(eta.begin(), eta.end(), v);
        out.insert(out.end(), static_cast<std::size_t>(n), v);
    }
    return out;
}

Stripped strip_zeros_decrement(const FinSeq& x)
{
    if (x.tail() == 0) throw std::invalid_argument("sequence has infinitely many zeros");
    if (x.alphabet() < 2) throw std::invalid_argument("alphabet too small to strip");
    std::vector<int> rest;
    std::size_t zeros = 0;
    for (int s : x.prefix()) {
        if (s == 0)
            ++zeros;
        else
            rest.push_back(s - 1);
    }
    return {FinSeq(x.alphabet() - 1, std::move(rest), x.tail() - 1), zeros};
}

FinSeq recombine_stripped(const Stripped& s)
{
    auto sorted = sort_d(s.rest);
    std::vector<int> out(s.zeroCount, 0);
    for (int v : sorted.prefix()) out.push_back(v + 1);
    return FinSeq(s.rest.alphabet() + 1, std::move(out), sorted.tail() + 1);
}

// ---------------------------------------------------------------------------
// connected components

namespace {

std::vector<std::vector<int>> adjacency_lists(const GraphInstance& g)
{
    std::vector<std::vector<int>> adj(g.size);
    for (auto [u, v] : g.edges) {
        if (!g.active[u] || !g.active[v]) continue;
        adj[u].push_back(v);
        adj[v].push_back(u);
    }
    return adj;
}

/// Vertices reachable from `from` by a path of active vertices.
std::vector<bool> reachable(const std::vector<std::vector<int>>& adj, int from)
{
    std::vector<bool> seen(adj.size(), false);
    std::deque<int> queue{from};
    seen[from] = true;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int v : adj[u]) {
            if (!seen[v]) {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    return seen;
}

void validate(const GraphInstance& g)
{
    if (g.size < 1) throw GraphError("graph needs at least one vertex");
    if (static_cast<int>(g.active.size()) != g.size) throw GraphError("activity predicate has wrong length");
    if (!g.active[0]) throw GraphError("vertex 0 must be active");
    if (g.componentBound < 1) throw GraphError("component bound must be positive");
    for (auto [u, v] : g.edges)
        if (u < 0 || v < 0 || u >= g.size || v >= g.size) throw GraphError("edge endpoint out of range");
}

struct Reach
{
    std::vector<std::vector<int>> adj;
    std::vector<int> label; // representative search result, computed lazily per vertex

    explicit Reach(const GraphInstance& g) : adj(adjacency_lists(g)), label(g.size, -1) {}

    bool connected(int u, int v)
    {
        if (label[u] < 0) fill(u);
        return label[u] == label[v];
    }

    void fill(int u)
    {
        auto seen = reachable(adj, u);
        for (std::size_t v = 0; v < seen.size(); ++v)
            if (seen[v]) label[v] = u;
    }
};

bool independent(Reach& reach, const std::vector<int>& set)
{
    for (std::size_t a = 0; a < set.size(); ++a)
        for (std::size_t b = a + 1; b < set.size(); ++b)
            if (reach.connected(set[a], set[b])) return false;
    return true;
}

/// Lexicographic successor of a combination over `pool`; false when exhausted.
bool next_combination(std::vector<int>& idx, int poolSize)
{
    const int r = static_cast<int>(idx.size());
    int i = r - 1;
    while (i >= 0 && idx[i] == poolSize - r + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
    return true;
}

std::vector<int> active_vertices(const GraphInstance& g)
{
    std::vector<int> pool;
    for (int v = 0; v < g.size; ++v)
        if (g.active[v]) pool.push_back(v);
    return pool;
}

} // namespace

GraphInstance GraphInstance::parse(std::string_view text)
{
    GraphInstance g;
    std::istringstream in{std::string(text)};
    std::string line;
    bool header = false;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first)) continue;
        if (!header) {
            std::string boundWord;
            if (first != "vertices" || !(ls >> g.size >> boundWord >> g.componentBound) || boundWord != "bound")
                throw GraphError("expected header \"vertices N bound B\"");
            if (g.size < 1) throw GraphError("graph needs at least one vertex");
            g.active.assign(g.size, true);
            header = true;
            continue;
        }
        if (first == "inactive") {
            int v;
            if (!(ls >> v) || v < 0 || v >= g.size) throw GraphError("bad inactive line: " + line);
            g.active[v] = false;
            continue;
        }
        int u = 0, v = 0;
        try {
            u = std::stoi(first);
        } catch (const std::exception&) {
            throw GraphError("bad edge line: " + line);
        }
        if (!(ls >> v)) throw GraphError("bad edge line: " + line);
        g.edges.emplace_back(u, v);
    }
    if (!header) throw GraphError("missing header");
    validate(g);
    return g;
}

std::string GraphInstance::str() const
{
    std::ostringstream os;
    os << "vertices " << size << " bound " << componentBound << "\n";
    for (int v = 0; v < size; ++v)
        if (!active[v]) os << "inactive " << v << "\n";
    for (auto [u, v] : edges) os << u << " " << v << "\n";
    return os.str();
}

std::optional<std::vector<int>> nth_subset(const GraphInstance& g, int size, std::size_t m)
{
    auto pool = active_vertices(g);
    if (size < 1 || size > static_cast<int>(pool.size())) return std::nullopt;
    std::vector<int> idx(size);
    std::iota(idx.begin(), idx.end(), 0);
    for (std::size_t step = 0; step < m; ++step)
        if (!next_combination(idx, static_cast<int>(pool.size()))) return std::nullopt;
    std::vector<int> out;
    for (int i : idx) out.push_back(pool[i]);
    return out;
}

FccEncoding fcc_to_sort(const GraphInstance& g)
{
    validate(g);
    const int n = g.componentBound;
    if (n < 2) throw GraphError("component bound must be at least 2");
    Reach reach(g);
    const auto pool = active_vertices(g);
    const int poolSize = static_cast<int>(pool.size());

    {
        // bound check: representatives of pairwise distinct components
        std::vector<int> reps;
        for (int v : pool) {
            bool fresh = std::none_of(reps.begin(), reps.end(), [&](int r) { return reach.connected(r, v); });
            if (fresh) reps.push_back(v);
        }
        if (static_cast<int>(reps.size()) > n)
            throw GraphError("found " + std::to_string(reps.size()) +
                             " pairwise independent vertices, more than the component bound " + std::to_string(n));
    }

    enum class State { Searching, Stuck, Exhausted };
    struct Counter
    {
        int size;
        std::size_t index = 0;
        std::vector<int> comb;
        State state = State::Searching;
    };
    std::vector<Counter> counters;
    for (int i = 2; i <= n; ++i) {
        Counter c;
        c.size = i;
        if (i > poolSize) {
            c.state = State::Exhausted;
        } else {
            c.comb.resize(i);
            std::iota(c.comb.begin(), c.comb.end(), 0);
        }
        counters.push_back(std::move(c));
    }

    std::vector<int> written;
    auto searching = [&] {
        return std::any_of(counters.begin(), counters.end(), [](const Counter& c) { return c.state == State::Searching; });
    };
    while (searching()) {
        for (auto& c : counters) {
            if (c.state != State::Searching) continue;
            std::vector<int> set;
            for (int i : c.comb) set.push_back(pool[i]);
            if (independent(reach, set)) {
                c.state = State::Stuck;
                continue;
            }
            written.push_back(c.size - 2);
            ++c.index;
            // a finite graph runs out of candidates; in the infinite graph this
            // counter would keep writing forever
            if (!next_combination(c.comb, poolSize)) c.state = State::Exhausted;
        }
        written.push_back(n - 1);
    }

    int tail = n - 1;
    for (const auto& c : counters) {
        if (c.state == State::Exhausted) {
            tail = c.size - 2;
            break;
        }
    }
    FccEncoding out{FinSeq(n, std::move(written), tail), {}};
    for (const auto& c : counters) out.counters.push_back(c.index);
    return out;
}

std::vector<bool> fcc_decode(const GraphInstance& g, const FinSeq& sorted)
{
    validate(g);
    const int components = sorted.tail() + 1;
    std::vector<bool> out(g.size, false);
    Reach reach(g);
    if (components == 1) {
        for (int v = 0; v < g.size; ++v) out[v] = g.active[v];
        return out;
    }
    const auto count = static_cast<std::size_t>(
        std::count(sorted.prefix().begin(), sorted.prefix().end(), components - 2));
    auto reps = nth_subset(g, components, count);
    if (!reps) throw GraphError("sorted sequence does not name an independent set of this graph");
    auto repOf = [&](int v) -> int {
        for (int r : *reps)
            if (reach.connected(v, r)) return r;
        throw GraphError("vertex linked to no representative");
    };
    const int zeroRep = repOf(0);
    for (int v = 0; v < g.size; ++v)
        if (g.active[v]) out[v] = repOf(v) == zeroRep;
    return out;
}

// ---------------------------------------------------------------------------
// Sort through connected components

GraphInstance sort_graph(const FinSeq& x, std::size_t horizon)
{
    if (x.alphabet() != 2) throw std::invalid_argument("sort_via_fcc needs a binary sequence");
    GraphInstance g;
    g.size = static_cast<int>(2 * horizon + 3);
    g.active.assign(g.size, true);
    g.componentBound = 2;
    g.edges.emplace_back(1, 0);
    int pending = 2;
    for (std::size_t t = 1; t <= horizon; ++t) {
        const int connector = static_cast<int>(2 * t + 1);
        const int fresh = static_cast<int>(2 * t + 2);
        g.edges.emplace_back(connector, 0);
        if (x.at(t - 1) == 0) {
            g.edges.emplace_back(connector, pending);
            pending = fresh;
        } else {
            g.edges.emplace_back(connector, fresh);
        }
    }
    return g;
}

FinSeq sort_via_fcc(const FinSeq& x)
{
    // Past the prefix the input is periodic with period one, so two tail
    // steps decide everything: with tail 1 the pending vertex after the last
    // zero is never joined, with tail 0 the first tail step joins it.
    const std::size_t horizon = x.prefix().size() + 2;
    const auto g = sort_graph(x, horizon);
    const auto adj = adjacency_lists(g);
    const auto component = reachable(adj, 0);

    std::vector<int> out;
    int pending = 2;
    while (true) {
        if (!component[pending]) return FinSeq(2, std::move(out), 1);
        // exhaustive search for the connector that joined the pending vertex
        std::size_t joinedAt = 0;
        for (std::size_t t = 1; t <= horizon && !joinedAt; ++t) {
            const int connector = static_cast<int>(2 * t + 1);
            if (std::find(adj[connector].begin(), adj[connector].end(), pending) != adj[connector].end()) joinedAt = t;
        }
        if (!joinedAt) throw std::logic_error("pending vertex joined without a connector");
        out.push_back(0);
        if (joinedAt > x.prefix().size()) return FinSeq(2, std::move(out), 0);
        pending = static_cast<int>(2 * joinedAt + 2);
    }
}

// ---------------------------------------------------------------------------
// Sort_{n+1} through n binary sorts

std::vector<FinSeq> product_translate(int n, const FinSeq& x)
{
    if (n < 1 || x.alphabet() != n + 1) throw std::invalid_argument("expected a sequence over n+1 symbols");
    std::vector<FinSeq> out;
    for (int i = 0; i < n; ++i) {
        std::vector<int> bits;
        for (int s : x.prefix()) bits.push_back(s <= i ? 0 : 1);
        out.emplace_back(2, std::move(bits), x.tail() <= i ? 0 : 1);
    }
    return out;
}

FinSeq product_recombine(const std::vector<FinSeq>& sortedComponents)
{
    const int n = static_cast<int>(sortedComponents.size());
    if (n < 1) throw std::invalid_argument("no components");
    // zeros[i] = number of symbols <= i, or nullopt if infinite
    std::vector<int> out;
    std::size_t previous = 0;
    for (int i = 0; i < n; ++i) {
        const auto& c = sortedComponents[i];
        if (c.alphabet() != 2) throw std::invalid_argument("components must be binary");
        if (c.tail() == 0) return FinSeq(n + 1, std::move(out), i);
        auto zeros = static_cast<std::size_t>(std::count(c.prefix().begin(), c.prefix().end(), 0));
        if (zeros < previous) throw std::invalid_argument("component counts are not monotone");
        out.insert(out.end(), zeros - previous, i);
        previous = zeros;
    }
    return FinSeq(n + 1, std::move(out), n);
}

// ---------------------------------------------------------------------------
// one-dimensional convex choice

Rational::Rational(std::int64_t n, std::int64_t d)
{
    if (d == 0) throw std::invalid_argument("zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    auto g = std::gcd(n < 0 ? -n : n, d);
    num = n / (g ? g : 1);
    den = d / (g ? g : 1);
}

Rational Rational::parse(std::string_view text)
{
    auto slash = text.find('/');
    try {
        if (slash == std::string_view::npos) return Rational(std::stoll(std::string(text)), 1);
        return Rational(std::stoll(std::string(text.substr(0, slash))), std::stoll(std::string(text.substr(slash + 1))));
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("bad rational: " + std::string(text));
    } catch (const std::out_of_range&) {
        throw std::invalid_argument("rational out of range: " + std::string(text));
    }
}

std::string Rational::str() const
{
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

bool operator<(const Rational& a, const Rational& b)
{
    return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
}

Rational midpoint(Rational a, Rational b)
{
    return Rational(a.num * b.den + b.num * a.den, 2 * a.den * b.den);
}

Rational enumerate_rational(std::size_t i)
{
    if (i == 0) return Rational(0, 1);
    if (i == 1) return Rational(1, 1);
    std::size_t seen = 2;
    for (std::int64_t den = 2;; ++den) {
        for (std::int64_t num = 1; num < den; ++num) {
            if (std::gcd(num, den) != 1) continue;
            if (seen++ == i) return Rational(num, den);
        }
    }
}

namespace {

/// Walks the same order as enumerate_rational without restarting each time.
class RationalWalk
{
public:
    Rational current() const { return index_ < 2 ? Rational(static_cast<std::int64_t>(index_), 1) : Rational(num_, den_); }

    void advance()
    {
        if (++index_ <= 2) return;
        do {
            if (++num_ == den_) {
                ++den_;
                num_ = 1;
            }
        } while (std::gcd(num_, den_) != 1);
    }

private:
    std::size_t index_ = 0;
    std::int64_t num_ = 1;
    std::int64_t den_ = 2;
};

void validate_stream(const std::vector<Interval>& stream)
{
    if (stream.empty()) throw std::invalid_argument("empty interval stream");
    const Rational zero(0, 1), one(1, 1);
    for (std::size_t s = 0; s < stream.size(); ++s) {
        const auto& iv = stream[s];
        if (iv.hi < iv.lo) throw std::invalid_argument("empty interval at stage " + std::to_string(s));
        if (iv.lo < zero || one < iv.hi) throw std::invalid_argument("interval leaves [0,1] at stage " + std::to_string(s));
        if (s > 0 && (iv.lo < stream[s - 1].lo || stream[s - 1].hi < iv.hi))
            throw std::invalid_argument("interval stream not nested at stage " + std::to_string(s));
    }
}

} // namespace

Xc1Encoding xc1_via_sort(const std::vector<Interval>& stream)
{
    validate_stream(stream);
    const std::size_t last = stream.size() - 1;
    Xc1Encoding out{FinSeq(2, {}, 1), {}};
    std::vector<int> written;
    std::size_t candidate = 0;
    RationalWalk walk;
    for (std::size_t s = 0;; ++s) {
        const auto& current = stream[std::min(s, last)];
        const Rational q = walk.current();
        if (!current.contains(q)) {
            written.push_back(0);
            out.exclusions.push_back(candidate);
            ++candidate;
            walk.advance();
        } else if (s >= last) {
            // the stream is constant from here on and never excludes q
            break;
        }
        written.push_back(1);
    }
    out.sortInput = FinSeq(2, std::move(written), 1);
    return out;
}

std::vector<Rational> xc1_decode(const std::vector<Interval>& stream, const FinSeq& sorted)
{
    validate_stream(stream);
    std::vector<Rational> out;
    std::optional<Rational> pinned;
    for (std::size_t s = 0; s < stream.size(); ++s) {
        if (!pinned && sorted.at(s) == 1) pinned = enumerate_rational(s);
        out.push_back(pinned ? *pinned : midpoint(stream[s].lo, stream[s].hi));
    }
    return out;
}

} // namespace wgl
