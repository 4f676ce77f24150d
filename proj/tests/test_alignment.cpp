#include "doctest.h"
#include "icsec/alignment.hpp"
#include "icsec/channel.hpp"

#include <cmath>
#include <set>

using namespace icsec;
using align::PhiMapping;

TEST_CASE("beam index map is a bijection with digits in 1..T") {
    PhiMapping map(4, 3);
    CHECK(map.M == 729); // 3^6
    std::set<align::ExponentTuple> seen;
    for (long long m = 1; m <= map.M; ++m) {
        auto r = align::phi(m, map);
        REQUIRE(r.size() == 6);
        for (int d : r) {
            CHECK(d >= 1);
            CHECK(d <= 3);
        }
        CHECK(align::phi_inv(r, map) == m);
        seen.insert(r);
    }
    CHECK((long long)seen.size() == map.M);
    CHECK_THROWS_AS(align::phi(0, map), std::out_of_range);
    CHECK_THROWS_AS(align::phi(map.M + 1, map), std::out_of_range);
}

TEST_CASE("mapping validates its arguments") {
    CHECK_THROWS_AS(PhiMapping(3, 2), std::invalid_argument);
    CHECK_THROWS_AS(PhiMapping(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(PhiMapping(4, 0), std::invalid_argument);
    CHECK_NOTHROW(PhiMapping(4, 1));
}

TEST_CASE("precoder values are the products their monomials claim") {
    auto spec = channel::GainSpec::parse("uniform(0.5,1.5)");
    auto H = channel::sample_channel(4, spec, 5);
    PhiMapping map(4, 2);
    for (long long m : {1ll, 17ll, 64ll}) {
        for (int l = 0; l < 4; ++l) {
            auto f = align::precoder_f(m, l, H, map);
            double v = 1;
            for (auto& [var, e] : f.mono.e)
                for (int c = 0; c < e; ++c) v *= H.at(var.first, var.second);
            CHECK(f.value == doctest::Approx(v).epsilon(1e-12));
            // message beams never ride on gains into the own receiver
            for (int tx = 0; tx < 4; ++tx) CHECK(f.mono.exponent(tx, l) == 0);

            auto g = align::precoder_g(m, l, H, map);
            int pl = channel::partner(4, l);
            for (int tx = 0; tx < 4; ++tx) CHECK(g.mono.exponent(tx, pl) == 0);
        }
    }
}

TEST_CASE("closed-form aligned sets match the brute-force monomial matcher") {
    for (int T : {2, 3}) {
        PhiMapping map(4, T);
        for (int l = 0; l < 4; ++l) {
            for (int i = 0; i < 4; ++i) {
                if (i == l) continue;
                auto fast = align::aligned_set(l, i, map);
                auto brute = align::aligned_set_brute(l, i, map);
                CHECK(fast.S == brute.S);
                CHECK(fast.pairs == brute.pairs);
            }
        }
    }
}

TEST_CASE("aligned set size and fraction follow the closed forms") {
    for (int K : {4, 6}) {
        for (int T : {2, 3, 4}) {
            PhiMapping map(K, T);
            auto S = align::aligned_set(0, 1, map);
            long long expect = (long long)(T - 1) * (T - 1);
            for (int j = 0; j < 2 * K - 4; ++j) expect *= T;
            CHECK((long long)S.pairs.size() == expect);
            auto fr = align::aligned_fraction(K, T);
            CHECK(fr.num == (long long)(T - 1) * (T - 1));
            CHECK(fr.den == (long long)T * T);
            // |S|/M equals the fraction exactly as integers
            CHECK((long long)S.pairs.size() * fr.den == map.M * fr.num);
        }
    }
}

TEST_CASE("aligned pairs really collide after the receiver gain bump") {
    PhiMapping map(4, 2);
    channel::ChannelMatrix ones;
    ones.K = 4;
    ones.g.assign(16, 1.0);
    for (int l = 0; l < 4; ++l) {
        int j = channel::partner(4, l);
        for (int i = 0; i < 4; ++i) {
            if (i == l) continue;
            auto S = align::aligned_set(l, i, map);
            REQUIRE(!S.pairs.empty());
            for (auto [m, mp] : S.pairs) {
                auto f = align::precoder_f(m, l, ones, map).mono;
                f.bump(l, i, 1);
                f.normalize();
                auto g = align::precoder_g(mp, j, ones, map).mono;
                g.bump(j, i, 1);
                g.normalize();
                CHECK(f == g);
            }
        }
    }
}

TEST_CASE("one beam per gain leaves nothing aligned") {
    PhiMapping map(4, 1);
    CHECK(map.M == 1);
    CHECK(align::aligned_set(0, 1, map).pairs.empty());
    CHECK_THROWS_AS(align::aligned_fraction(4, 1), std::invalid_argument);
}

TEST_CASE("alignment needs an unintended receiver") {
    PhiMapping map(4, 2);
    CHECK_THROWS_AS(align::aligned_set(1, 1, map), std::invalid_argument);
}
