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

#include "oracle.hpp"
#include "sort_checks.hpp"

#include <doctest.h>

#include <random>

using namespace wgl;

TEST_CASE("sort examples")
{
    CHECK(sort_d(FinSeq::parse(2, "0110|1")).str() == "00|1");
    CHECK(sort_d(FinSeq::parse(3, "2102|2")).str() == "01|2");
    CHECK(sort_d(FinSeq::parse(2, "|0")).str() == "|0");
    // symbols above the tail vanish in the limit
    CHECK(sort_d(FinSeq::parse(3, "2200|1")).str() == "00|1");
    CHECK_THROWS(FinSeq::parse(2, "012|1"));
    CHECK_THROWS(FinSeq::parse(2, "01"));
}

TEST_CASE("partial sorts")
{
    CHECK(u_partial_sort({2, 1, 0, 2, 1}, 2) == std::vector<int>{0, 1, 1});
    CHECK(u_partial_sort({2, 1, 0, 2}, 2) == std::vector<int>{0, 1});
    CHECK(u_partial_sort({2, 1, 0, 2, 1}, 0).empty());
    CHECK(u_partial_sort({0, 0, 0}, 1) == std::vector<int>{0, 0, 0});
    CHECK(u_partial_sort({2, 1, 0, 2, 1}, 3) == std::vector<int>{0, 1, 1, 2, 2});
}

TEST_CASE("stripping zeros")
{
    auto s = strip_zeros_decrement(FinSeq::parse(2, "0101|1"));
    CHECK(s.rest.str() == "00|0");
    CHECK(s.zeroCount == 2);
    s = strip_zeros_decrement(FinSeq::parse(3, "2012|2"));
    CHECK(s.rest.str() == "101|1");
    CHECK(s.zeroCount == 1);
    CHECK_THROWS(strip_zeros_decrement(FinSeq::parse(2, "1|0")));
}

TEST_CASE("sort properties on random sequences")
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const auto x = sortcheck::random_finseq(rng, 2 + static_cast<int>(rng() % 4), 12);
        CHECK(sortcheck::sort_properties(x).empty());
        if (x.tail() != 0) CHECK(sortcheck::strip_round_trip(x).empty());
        if (x.alphabet() == 2) CHECK(sortcheck::fcc_sort_agrees(x).empty());
        CHECK(sortcheck::product_agrees(x).empty());
    }
}

TEST_CASE("connected components through Sort")
{
    SUBCASE("one component")
    {
        auto g = GraphInstance::parse("vertices 5 bound 2\n0 1\n1 2\n2 3\n3 4\n");
        // every pair is refuted, so the 2-counter writes 0 for ever
        auto enc = fcc_to_sort(g);
        CHECK(enc.sortInput.tail() == 0);
        CHECK(enc.counters == std::vector<std::size_t>{10});
        auto member = fcc_decode(g, sort_d(enc.sortInput));
        CHECK(member == std::vector<bool>(5, true));
    }
    SUBCASE("two components")
    {
        auto g = GraphInstance::parse("vertices 4 bound 2\n0 1\n2 3\n");
        auto member = fcc_decode(g, sort_d(fcc_to_sort(g).sortInput));
        CHECK(member == std::vector<bool>{true, true, false, false});
    }
    SUBCASE("inactive vertices are never members")
    {
        auto g = GraphInstance::parse("vertices 4 bound 2\n# comment\ninactive 3\n0 1\n");
        auto member = fcc_decode(g, sort_d(fcc_to_sort(g).sortInput));
        CHECK(member == std::vector<bool>{true, true, false, false});
        CHECK(GraphInstance::parse(g.str()).str() == g.str());
    }
    SUBCASE("bound violations are reported")
    {
        auto g = GraphInstance::parse("vertices 3 bound 2\n");
        CHECK_THROWS_AS(fcc_to_sort(g), GraphError);
        CHECK_THROWS_AS(GraphInstance::parse("vertices 2 bound 2\n0 5\n"), GraphError);
    }
    SUBCASE("random graphs against union-find")
    {
        std::mt19937_64 rng(2);
        for (int i = 0; i < 600; ++i) CHECK(sortcheck::fcc_agrees(sortcheck::random_graph(rng)).empty());
    }
}

TEST_CASE("sort through connected components examples")
{
    CHECK(sort_via_fcc(FinSeq::parse(2, "0110|1")).str() == "00|1");
    CHECK(sort_via_fcc(FinSeq::parse(2, "|1")).str() == "|1");
    CHECK(same_sequence(sort_via_fcc(FinSeq::parse(2, "1101|0")), FinSeq::parse(2, "|0")));
}

TEST_CASE("product translation")
{
    auto x = FinSeq::parse(2, "0110|1");
    auto parts = product_translate(1, x);
    REQUIRE(parts.size() == 1);
    CHECK(parts[0] == x);
    CHECK(same_sequence(product_recombine({sort_d(parts[0])}), sort_d(x)));

    auto y = FinSeq::parse(3, "2102|2");
    parts = product_translate(2, y);
    REQUIRE(parts.size() == 2);
    std::vector<FinSeq> sorted;
    for (const auto& p : parts) sorted.push_back(sort_d(p));
    CHECK(product_recombine(sorted).str() == "01|2");
}

TEST_CASE("rationals and one-dimensional convex choice")
{
    CHECK(enumerate_rational(0) == Rational(0, 1));
    CHECK(enumerate_rational(1) == Rational(1, 1));
    CHECK(enumerate_rational(2) == Rational(1, 2));
    CHECK(enumerate_rational(3) == Rational(1, 3));
    CHECK(enumerate_rational(4) == Rational(2, 3));
    CHECK(enumerate_rational(5) == Rational(1, 4));
    CHECK(enumerate_rational(6) == Rational(3, 4));
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational::parse("3/9").str() == "1/3");

    SUBCASE("a rational singleton is pinned")
    {
        std::vector<Interval> a{{Rational(1, 3), Rational(1, 3)}};
        auto enc = xc1_via_sort(a);
        auto out = xc1_decode(a, sort_d(enc.sortInput));
        CHECK(out.back() == Rational(1, 3));
    }
    SUBCASE("the unit interval")
    {
        std::vector<Interval> a{{Rational(0, 1), Rational(1, 1)}};
        auto out = xc1_decode(a, sort_d(xc1_via_sort(a).sortInput));
        CHECK(a[0].contains(out[0]));
    }
    SUBCASE("a nest around an irrational point")
    {
        // continued-fraction style brackets around 1/sqrt(2)
        std::vector<Interval> a{{Rational(0, 1), Rational(1, 1)},  {Rational(2, 3), Rational(3, 4)},
                                {Rational(7, 10), Rational(5, 7)}, {Rational(12, 17), Rational(29, 41)},
                                {Rational(70, 99), Rational(29, 41)}};
        auto out = xc1_decode(a, sort_d(xc1_via_sort(a).sortInput));
        for (std::size_t s = 0; s < a.size(); ++s) CHECK(a[s].contains(out[s]));
    }
    CHECK_THROWS(xc1_via_sort({{Rational(0, 1), Rational(1, 2)}, {Rational(1, 4), Rational(3, 4)}}));
    CHECK_THROWS(xc1_via_sort({{Rational(1, 2), Rational(1, 3)}}));

    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) CHECK(sortcheck::xc1_sound(sortcheck::random_nest(rng)).empty());
}
