#include "doctest.h"
#include "icsec/channel.hpp"
#include "icsec/rng.hpp"

using namespace icsec;
using channel::ChannelMatrix;
using channel::GainSpec;

TEST_CASE("partner pairing is an involution that swaps ends") {
    for (int K = 4; K <= 8; K += 2) {
        for (int i = 0; i < K; ++i) {
            int p = channel::partner(K, i);
            CHECK(p >= 0);
            CHECK(p < K);
            CHECK(channel::partner(K, p) == i);
            CHECK(p != i); // even K: nobody protects themselves
        }
        CHECK(channel::partner(K, 0) == K - 1);
    }
}

TEST_CASE("gain spec parsing accepts the three families and rejects junk") {
    auto u = GainSpec::parse("uniform(0.5,1.5)");
    CHECK(u.kind == GainSpec::Kind::Uniform);
    CHECK(u.p0 == 0.5);
    CHECK(u.p1 == 1.5);
    auto g = GainSpec::parse("gaussmag(0,1)");
    CHECK(g.kind == GainSpec::Kind::GaussMag);
    auto b = GainSpec::parse("bands(1.2,1.8,0.3,0.6)");
    CHECK(b.kind == GainSpec::Kind::Bands);
    CHECK(b.p3 == 0.6);

    CHECK_THROWS_AS(GainSpec::parse("uniform(1.5,0.5)"), std::invalid_argument);
    CHECK_THROWS_AS(GainSpec::parse("uniform(-1,1)"), std::invalid_argument);
    CHECK_THROWS_AS(GainSpec::parse("gaussmag(0,0)"), std::invalid_argument);
    CHECK_THROWS_AS(GainSpec::parse("bands(1,2,3)"), std::invalid_argument);
    CHECK_THROWS_AS(GainSpec::parse("cauchy(0,1)"), std::invalid_argument);
}

TEST_CASE("sampling is seed-deterministic and respects the band limits") {
    auto spec = GainSpec::parse("bands(1.2,1.8,0.3,0.6)");
    auto H1 = channel::sample_channel(4, spec, 42);
    auto H2 = channel::sample_channel(4, spec, 42);
    auto H3 = channel::sample_channel(4, spec, 43);
    CHECK(H1.g == H2.g);
    CHECK(H1.g != H3.g);
    for (int j = 0; j < 4; ++j) {
        for (int i = 0; i < 4; ++i) {
            double v = H1.at(j, i);
            if (j == i) {
                CHECK(v >= 1.2);
                CHECK(v <= 1.8);
            } else {
                CHECK(v >= 0.3);
                CHECK(v <= 0.6);
            }
        }
    }
}

TEST_CASE("gaussmag gains are positive") {
    auto spec = GainSpec::parse("gaussmag(0,1)");
    auto H = channel::sample_channel(5, spec, 7);
    for (double v : H.g) CHECK(v > 0);
}

TEST_CASE("two users are rejected") {
    auto spec = GainSpec::parse("uniform(0.5,1.5)");
    CHECK_THROWS_WITH_AS(channel::sample_channel(2, spec, 1), "K must be >= 3",
                         std::invalid_argument);
}

TEST_CASE("padding preserves the original block and marks the dummy") {
    auto spec = GainSpec::parse("uniform(0.5,1.5)");
    auto H = channel::sample_channel(5, spec, 9);
    CHECK(H.dummy == -1);
    auto P = channel::pad_dummy_user(H, spec, child_seed(9, 1));
    CHECK(P.K == 6);
    CHECK(P.dummy == 5);
    for (int j = 0; j < 5; ++j)
        for (int i = 0; i < 5; ++i) CHECK(P.at(j, i) == H.at(j, i));
    for (int i = 0; i < 6; ++i) CHECK(P.at(5, i) > 0);
    for (int j = 0; j < 5; ++j) CHECK(P.at(j, 5) > 0);
    CHECK_THROWS_AS(channel::pad_dummy_user(P, spec, 1), std::invalid_argument);
}

TEST_CASE("channel json round trip is exact") {
    auto spec = GainSpec::parse("uniform(0.5,1.5)");
    auto H = channel::sample_channel(5, spec, 11);
    auto P = channel::pad_dummy_user(H, spec, 12);
    auto back = ChannelMatrix::from_json(P.to_json());
    CHECK(back.K == P.K);
    CHECK(back.g == P.g);
    CHECK(back.seed == P.seed);
    CHECK(back.spec == P.spec);
    CHECK(back.dummy == P.dummy);
    auto j = P.to_json();
    CHECK(j["dummy"].get<int>() == 6); // serialized 1-based
}
