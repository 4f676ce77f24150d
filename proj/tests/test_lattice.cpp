#include "doctest.h"
#include "icsec/lattice.hpp"
#include "icsec/rng.hpp"

#include <cmath>

using namespace icsec;
using lattice::Level;
using lattice::NestedScalarChain;
using lattice::Role;

TEST_CASE("folding lands in the half-open cell") {
    CHECK(lattice::mod_lattice(2.0, 4.0) == -2.0);
    CHECK(lattice::mod_lattice(-2.0, 4.0) == -2.0);
    CHECK(lattice::mod_lattice(5.0, 4.0) == 1.0);
    CHECK(lattice::mod_lattice(3.7, 4.0) == doctest::Approx(-0.3).epsilon(1e-12));
    SplitMix64 rng(3);
    for (int t = 0; t < 1000; ++t) {
        double g = rng.uniform(0.5, 8.0);
        double x = rng.uniform(-50.0, 50.0);
        double m = lattice::mod_lattice(x, g);
        CHECK(m >= -g / 2);
        CHECK(m < g / 2);
        CHECK(lattice::mod_lattice(m, g) == m);
        // x and its fold differ by a lattice point
        double d = (x - m) / g;
        CHECK(std::abs(d - std::round(d)) <= 1e-9);
    }
}

TEST_CASE("quantizer rounds halves toward zero") {
    CHECK(lattice::quantize(0.5, 1.0) == 0.0);
    CHECK(lattice::quantize(-0.5, 1.0) == 0.0);
    CHECK(lattice::quantize(1.5, 1.0) == 1.0);
    CHECK(lattice::quantize(-1.5, 1.0) == -1.0);
    CHECK(lattice::quantize(0.51, 1.0) == 1.0);
    CHECK(lattice::quantize(2.0, 4.0) == 0.0);
    CHECK(lattice::quantize(2.1, 4.0) == 4.0);
    CHECK(lattice::quantize(-6.0, 4.0) == -4.0);
}

TEST_CASE("chain accepts nested scales and rejects broken ones") {
    auto ok = NestedScalarChain::build({
        {Role::Shaping, 2, 8.0},
        {Role::Shaping, 1, 8.0},
        {Role::MessageCoarse, 2, 4.0},
        {Role::MessageCoarse, 1, 4.0},
        {Role::MessageFine, 2, 2.0},
        {Role::MessageFine, 1, 1.0},
    });
    CHECK(ok.levels.size() == 6);
    CHECK(ok.second_moment(0) == doctest::Approx(64.0 / 12).epsilon(1e-12));
    CHECK(ok.find(Role::MessageFine, 1) == 5);
    CHECK(ok.find(Role::JammingFine, 1) == -1);

    CHECK_THROWS_AS(NestedScalarChain::build({{Role::Shaping, 1, 8.0},
                                              {Role::MessageCoarse, 1, 3.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(NestedScalarChain::build({{Role::Shaping, 1, 4.0},
                                              {Role::Shaping, 2, 4.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(NestedScalarChain::build({{Role::MessageFine, 1, 4.0},
                                              {Role::Shaping, 1, 4.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(NestedScalarChain::build({{Role::Shaping, 1, 4.0},
                                              {Role::MessageCoarse, 1, 8.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(NestedScalarChain::build({{Role::Shaping, 1, 4.0},
                                              {Role::Shaping, 1, 4.0}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(NestedScalarChain::build({}), std::invalid_argument);
    CHECK_THROWS_AS(NestedScalarChain::build({{Role::Shaping, 0, 4.0}}), std::invalid_argument);
}

TEST_CASE("dithered codewords stay in the cell and shift by the dither") {
    SplitMix64 rng(5);
    for (int t = 0; t < 200; ++t) {
        double gc = 4.0;
        std::vector<double> tv(8), dv(8);
        for (size_t k = 0; k < 8; ++k) {
            tv[k] = lattice::mod_lattice(std::floor(rng.uniform(-8.0, 8.0)), gc);
            dv[k] = rng.uniform(-gc / 2, gc / 2);
        }
        auto x = lattice::dither_encode(tv, dv, gc);
        for (size_t k = 0; k < 8; ++k) {
            CHECK(x[k] >= -gc / 2);
            CHECK(x[k] < gc / 2);
            double d = (tv[k] + dv[k] - x[k]) / gc;
            CHECK(std::abs(d - std::round(d)) <= 1e-9);
        }
    }
    CHECK_THROWS_AS(lattice::dither_encode({1.0}, {1.0, 2.0}, 4.0), std::invalid_argument);
}

TEST_CASE("full dither support wipes out the message exactly") {
    for (int q = 2; q <= 64; ++q) {
        auto c = lattice::crypto_lemma_check(q);
        CHECK(c.exact);
        CHECK(c.tv_max == 0.0);
        CHECK(c.mutual_info == 0.0);
    }
}

TEST_CASE("dropping one dither coset leaks") {
    for (int q : {2, 3, 4, 16, 64}) {
        auto c = lattice::crypto_lemma_check_subset(q);
        CHECK(c.tv_max > 0.0);
        CHECK(c.tv_max == doctest::Approx(1.0 / q).epsilon(1e-12));
        CHECK(c.mutual_info > 0.0);
    }
}

TEST_CASE("quantized observable entropy: one aligned pair") {
    auto e = lattice::quantization_entropy_check(1.0, 1.0, {1.0}, {1.0}, 200000, 99);
    CHECK(e.bound == 1.0); // log2 of exactly 2
    // sum of two equal uniforms at the pair-power cell: triangle over 3 cells
    CHECK(e.cells == 3);
    CHECK(e.entropy > 0.47);
    CHECK(e.entropy < 0.55);
    CHECK(e.entropy <= e.bound + 3 * e.se);
}

TEST_CASE("quantized observable entropy: vanishing message power") {
    auto e = lattice::quantization_entropy_check(1.0, 1.0, {0.0}, {1.0}, 50000, 7);
    CHECK(e.entropy == 0.0);
    CHECK(e.bound == 0.0);
    CHECK(e.se == 0.0);
    CHECK(e.cells == 1);
}

TEST_CASE("quantized observable entropy: four beams") {
    std::vector<double> p(4, 0.25);
    auto e = lattice::quantization_entropy_check(1.0, 1.0, p, p, 200000, 13);
    CHECK(e.bound == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.entropy <= e.bound + 3 * e.se);
    CHECK(e.entropy > 1.0);
}

TEST_CASE("entropy check needs jamming and sane inputs") {
    CHECK_THROWS_AS(lattice::quantization_entropy_check(1, 1, {1.0}, {0.0}, 100, 1),
                    std::domain_error);
    CHECK_THROWS_AS(lattice::quantization_entropy_check(1, 1, {1.0}, {1.0, 1.0}, 100, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(lattice::quantization_entropy_check(1, 1, {-1.0}, {1.0}, 100, 1),
                    std::invalid_argument);
}

TEST_CASE("toy transceiver: clean at high snr, lost in noise at low snr") {
    lattice::ToyConfig cfg;
    cfg.K = 4;
    cfg.blocks = 8;
    cfg.trials = 60;
    cfg.spec = channel::GainSpec::parse("bands(2,4,0.05,0.15)");
    cfg.seed = 21;

    cfg.snr_db = 40;
    auto hi = lattice::toy_end_to_end(cfg);
    CHECK(hi.decodes == 60 * 8 * 4);
    CHECK(hi.error_rate < 0.05);

    cfg.snr_db = -10;
    auto lo = lattice::toy_end_to_end(cfg);
    CHECK(lo.error_rate > 0.4);

    auto again = lattice::toy_end_to_end(cfg);
    CHECK(again.errors == lo.errors);
}
