// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <vector>

#include "hiermod/constellation.hpp"

using namespace hiermod;

namespace {

std::vector<BitQuad> all_bit_quads() {
    std::vector<BitQuad> quads;
    for (int v = 0; v < 16; ++v)
        quads.push_back({static_cast<uint8_t>(v & 1), static_cast<uint8_t>((v >> 1) & 1),
                         static_cast<uint8_t>((v >> 2) & 1), static_cast<uint8_t>((v >> 3) & 1)});
    return quads;
}

} // namespace

TEST_CASE("qpsk mapping puts basic 00 in the first quadrant") {
    HierarchyConfig cfg{0.1, 1.0};
    const IqSymbol s00 = map_qpsk(0, 0, cfg);
    CHECK(s00.i == doctest::Approx(1.0));
    CHECK(s00.q == doctest::Approx(1.0));

    const IqSymbol s11 = map_qpsk(1, 1, cfg);
    CHECK(s11.i == doctest::Approx(-1.0));
    CHECK(s11.q == doctest::Approx(-1.0));

    HierarchyConfig scaled{0.1, 2.0};
    const IqSymbol s01 = map_qpsk(0, 1, scaled);
    CHECK(s01.i == doctest::Approx(2.0));
    CHECK(s01.q == doctest::Approx(-2.0));
}

TEST_CASE("hierarchical mapping reproduces the per-dimension offsets") {
    HierarchyConfig cfg{0.1, 1.0};

    // basic 1 with secondary 1 sits at -(1-lambda)d1
    const IqSymbol inner = map_hierarchical({1, 0, 1, 0}, cfg);
    CHECK(inner.i == doctest::Approx(-0.9));

    const IqSymbol outer = map_hierarchical({0, 0, 0, 0}, cfg);
    CHECK(outer.i == doctest::Approx(1.1));
    CHECK(outer.q == doctest::Approx(1.1));

    // lambda = 0 collapses every cloud onto its QPSK point
    HierarchyConfig qpsk{0.0, 1.0};
    for (const BitQuad& quad : all_bit_quads()) {
        const IqSymbol h = map_hierarchical(quad, qpsk);
        const IqSymbol p = map_qpsk(quad.b_i, quad.b_q, qpsk);
        CHECK(h.i == doctest::Approx(p.i));
        CHECK(h.q == doctest::Approx(p.q));
    }
}

TEST_CASE("mean symbol power equals the carrier power") {
    for (double lambda : {0.0, 0.1, 0.15, 0.25, 0.5}) {
        for (Mapping mapping : {Mapping::KarnaughGray, Mapping::Balanced}) {
            HierarchyConfig cfg{lambda, 1.3, mapping};
            double power = 0.0;
            for (const BitQuad& quad : all_bit_quads()) {
                const IqSymbol s = map_hierarchical(quad, cfg);
                power += s.i * s.i + s.q * s.q;
            }
            power /= 16.0;
            CHECK(power == doctest::Approx(cfg.carrier_power()).epsilon(1e-12));
        }
    }
}

TEST_CASE("hard demapping round-trips every constellation point") {
    for (double lambda : {0.1, 0.2, 0.5}) {
        for (Mapping mapping : {Mapping::KarnaughGray, Mapping::Balanced}) {
            HierarchyConfig cfg{lambda, 1.0, mapping};
            for (const BitQuad& quad : all_bit_quads()) {
                const BitQuad hat = demap_hard(map_hierarchical(quad, cfg), cfg);
                CHECK(hat == quad);
            }
        }
    }
}

TEST_CASE("hard demapping slices to the nearest amplitude per dimension") {
    HierarchyConfig cfg{0.1, 1.0};
    const BitQuad exact = demap_hard({-0.9, -0.9}, cfg);
    CHECK(exact == BitQuad{1, 1, 1, 1});

    // 0.95 is nearer the inner point 0.9, 1.05 nearer the outer 1.1
    const BitQuad mixed = demap_hard({0.95, 1.05}, cfg);
    CHECK(mixed.b_i == 0);
    CHECK(mixed.b_q == 0);
    CHECK(mixed.s_i == 1);
    CHECK(mixed.s_q == 0);

    // Equidistant between 0.9 and 1.1: the inner point wins the tie.
    const BitQuad tie = demap_hard({1.0, 1.0}, cfg);
    CHECK(tie.s_i == 1);
    CHECK(tie.s_q == 1);
}

TEST_CASE("legacy slicer uses signs with a deterministic zero rule") {
    CHECK(demap_legacy({1.1, -0.9}).b_i == 0);
    CHECK(demap_legacy({1.1, -0.9}).b_q == 1);
    CHECK(demap_legacy({-0.001, 0.001}).b_i == 1);
    CHECK(demap_legacy({-0.001, 0.001}).b_q == 0);
    CHECK(demap_legacy({0.0, 5.0}).b_i == 0);
    CHECK(demap_legacy({0.0, 5.0}).b_q == 0);
}

TEST_CASE("legacy slicer recovers basic bits from any hierarchical point") {
    for (double lambda : {0.0, 0.1, 0.3, 0.5}) {
        HierarchyConfig cfg{lambda, 1.0};
        for (const BitQuad& quad : all_bit_quads()) {
            const LegacyBits bits = demap_legacy(map_hierarchical(quad, cfg));
            CHECK(bits.b_i == quad.b_i);
            CHECK(bits.b_q == quad.b_q);
        }
    }
}

TEST_CASE("balanced mapping flips only the secondary role on Q") {
    HierarchyConfig gray{0.15, 1.0, Mapping::KarnaughGray};
    HierarchyConfig balanced{0.15, 1.0, Mapping::Balanced};
    for (const BitQuad& quad : all_bit_quads()) {
        const IqSymbol g = map_hierarchical(quad, gray);
        const IqSymbol b = map_hierarchical(quad, balanced);
        CHECK(g.i == doctest::Approx(b.i));
        BitQuad flipped = quad;
        flipped.s_q ^= 1;
        const IqSymbol g_flipped = map_hierarchical(flipped, gray);
        CHECK(b.q == doctest::Approx(g_flipped.q));
    }
}

TEST_CASE("config validation rejects out-of-range parameters") {
    CHECK_THROWS_AS(map_qpsk(0, 0, HierarchyConfig{-0.1, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(map_qpsk(0, 0, HierarchyConfig{0.6, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(map_qpsk(0, 0, HierarchyConfig{0.1, 0.0}), std::invalid_argument);
}
