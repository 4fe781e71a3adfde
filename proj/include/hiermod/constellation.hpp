// SPDX-License-Identifier: Apache-2.0
#ifndef HIERMOD_CONSTELLATION_HPP
#define HIERMOD_CONSTELLATION_HPP

#include <cstdint>
#include <stdexcept>

namespace hiermod {

/// Bit-to-point labeling of the combined QPSK/16QAM constellation.
enum class Mapping {
    /// Karnaugh-map style Gray labeling: a secondary 1 selects the inner
    /// amplitude on both dimensions.
    KarnaughGray,
    /// Same labeling on I; the secondary bit role is inverted on Q, so
    /// secondary 0s and 1s degrade the basic layer symmetrically.
    Balanced,
};

enum class Dim { I, Q };

/// Geometry of the hierarchical constellation. lambda = d2/d1 is the ratio
/// of the 16QAM half-minimum-distance to the QPSK half-distance: 0 collapses
/// to plain QPSK, 1/2 is uniform 16QAM.
struct HierarchyConfig {
    double lambda = 0.0;
    double d1 = 1.0;
    Mapping mapping = Mapping::KarnaughGray;

    /// Mean symbol power over the 16 equiprobable points, 2*(1+lambda^2)*d1^2.
    double carrier_power() const { return 2.0 * (1.0 + lambda * lambda) * d1 * d1; }

    void validate() const {
        if (!(lambda >= 0.0 && lambda <= 0.5))
            throw std::invalid_argument("HierarchyConfig: lambda must be in [0, 1/2]");
        if (!(d1 > 0.0))
            throw std::invalid_argument("HierarchyConfig: d1 must be positive");
    }
};

/// One complex channel symbol in constellation units.
struct IqSymbol {
    double i = 0.0;
    double q = 0.0;
};

/// The four bits carried by one symbol: basic (quadrant) bits b_i, b_q and
/// secondary (within-quadrant) bits s_i, s_q.
struct BitQuad {
    uint8_t b_i = 0;
    uint8_t b_q = 0;
    uint8_t s_i = 0;
    uint8_t s_q = 0;

    bool operator==(const BitQuad&) const = default;
};

/// Amplitude transmitted on one dimension for a (basic, secondary) bit pair.
/// Basic bit picks the sign (0 -> +, 1 -> -); the secondary bit picks inner
/// (1-lambda)*d1 or outer (1+lambda)*d1. Under KarnaughGray a secondary 1 is
/// inner on both dimensions; under Balanced the role is inverted on Q.
double dimension_amplitude(int basic_bit, int secondary_bit, const HierarchyConfig& cfg, Dim dim);

/// Maps one pair of basic bits onto the plain QPSK constellation (+-d1, +-d1).
IqSymbol map_qpsk(int b_i, int b_q, const HierarchyConfig& cfg);

/// Maps all four bits onto the combined 16QAM constellation.
IqSymbol map_hierarchical(const BitQuad& bits, const HierarchyConfig& cfg);

/// Minimum-distance slicer over the 16 constellation points. Ties resolve
/// toward the inner amplitude, positive sign first.
BitQuad demap_hard(const IqSymbol& y, const HierarchyConfig& cfg);

/// Sign slicer of the deployed QPSK receiver: bit = 0 for amplitude > 0,
/// 1 for amplitude < 0; exactly 0 resolves to bit 0.
struct LegacyBits {
    uint8_t b_i = 0;
    uint8_t b_q = 0;
};
LegacyBits demap_legacy(const IqSymbol& y);

} // namespace hiermod

#endif
