// SPDX-License-Identifier: Apache-2.0
#include "hiermod/constellation.hpp"

#include <algorithm>
#include <cmath>

namespace hiermod {

double dimension_amplitude(int basic_bit, int secondary_bit, const HierarchyConfig& cfg, Dim dim) {
    bool secondary_is_inner = secondary_bit != 0;
    if (cfg.mapping == Mapping::Balanced && dim == Dim::Q)
        secondary_is_inner = secondary_bit == 0;
    const double mag = secondary_is_inner ? (1.0 - cfg.lambda) * cfg.d1
                                          : (1.0 + cfg.lambda) * cfg.d1;
    return basic_bit ? -mag : mag;
}

IqSymbol map_qpsk(int b_i, int b_q, const HierarchyConfig& cfg) {
    cfg.validate();
    return {b_i ? -cfg.d1 : cfg.d1, b_q ? -cfg.d1 : cfg.d1};
}

IqSymbol map_hierarchical(const BitQuad& bits, const HierarchyConfig& cfg) {
    cfg.validate();
    return {dimension_amplitude(bits.b_i, bits.s_i, cfg, Dim::I),
            dimension_amplitude(bits.b_q, bits.s_q, cfg, Dim::Q)};
}

namespace {

struct DimCandidate {
    double amp;
    uint8_t basic;
    uint8_t secondary;
};

struct DimDecision {
    uint8_t basic;
    uint8_t secondary;
};

// Strict-improvement scan over the four amplitudes, probed inner first and
// positive before negative, which fixes the tie rule: smaller |amplitude|
// wins, then positive sign.
DimDecision slice_dimension(double y, const HierarchyConfig& cfg, Dim dim) {
    DimCandidate cands[4];
    int n = 0;
    for (int b = 0; b < 2; ++b)
        for (int s = 0; s < 2; ++s)
            cands[n++] = {dimension_amplitude(b, s, cfg, dim),
                          static_cast<uint8_t>(b), static_cast<uint8_t>(s)};
    std::stable_sort(std::begin(cands), std::end(cands), [](const auto& a, const auto& b) {
        if (std::abs(a.amp) != std::abs(b.amp)) return std::abs(a.amp) < std::abs(b.amp);
        return a.amp > b.amp;
    });
    DimDecision best{cands[0].basic, cands[0].secondary};
    double best_dist = (y - cands[0].amp) * (y - cands[0].amp);
    for (int k = 1; k < 4; ++k) {
        const double d = (y - cands[k].amp) * (y - cands[k].amp);
        if (d < best_dist) {
            best = {cands[k].basic, cands[k].secondary};
            best_dist = d;
        }
    }
    return best;
}

} // namespace

BitQuad demap_hard(const IqSymbol& y, const HierarchyConfig& cfg) {
    cfg.validate();
    const DimDecision di = slice_dimension(y.i, cfg, Dim::I);
    const DimDecision dq = slice_dimension(y.q, cfg, Dim::Q);
    return {di.basic, dq.basic, di.secondary, dq.secondary};
}

LegacyBits demap_legacy(const IqSymbol& y) {
    return {static_cast<uint8_t>(y.i < 0.0), static_cast<uint8_t>(y.q < 0.0)};
}

} // namespace hiermod
