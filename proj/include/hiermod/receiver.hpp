// SPDX-License-Identifier: Apache-2.0
#ifndef HIERMOD_RECEIVER_HPP
#define HIERMOD_RECEIVER_HPP

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hiermod/channel.hpp"
#include "hiermod/coding.hpp"
#include "hiermod/constellation.hpp"

namespace hiermod {

/// Gaussian pdf (1/(sigma sqrt(2 pi))) exp(-x^2 / (2 sigma^2)).
double gaussian_density(double x, double sigma);

/// What the two decoders exchange between iterations.
enum class PriorMode {
    /// Full a-posteriori probabilities are fed back, including each
    /// decoder's own previous output as a prior on its own coded bits.
    FullApp,
    /// Only extrinsic components cross the demapper; no decoder sees its
    /// own previous output. Default.
    Extrinsic,
};

struct IterationSchedule {
    int max_iterations = 1; // total decoding passes; pass 0 uses uniform priors
    PriorMode prior_mode = PriorMode::Extrinsic;

    void validate() const;
};

/// Per-symbol soft demapper output; index 0 is the I dimension, 1 is Q.
struct SoftDemapResult {
    std::array<SoftBit, 2> basic;
    std::array<SoftBit, 2> secondary;
};

/// Channel probabilities for one frame: one SoftBit per basic coded bit and
/// one per secondary slot, two of each per symbol (I then Q).
struct DemapperOutput {
    SoftSequence basic_channel_probs;
    SoftSequence secondary_channel_probs;
};

/// Marginalizes the four per-dimension Gaussian conditionals into per-bit
/// channel probabilities: the basic likelihood averages over the secondary
/// prior and vice versa. I and Q are handled identically and independently.
SoftDemapResult demap_soft(const IqSymbol& y,
                           const std::array<SoftBit, 2>& priors_basic,
                           const std::array<SoftBit, 2>& priors_secondary,
                           const HierarchyConfig& cfg, double sigma);

DemapperOutput demap_frame(std::span<const IqSymbol> received,
                           std::span<const SoftBit> priors_basic,
                           std::span<const SoftBit> priors_secondary,
                           const HierarchyConfig& cfg, double sigma);

/// How one frame's two coded streams share the symbol stream. Each symbol
/// carries two basic coded bits (I, Q) and two secondary slots. Secondary
/// coded bits are repeated `repetition` times; slots beyond the repeated
/// stream carry filler bits that are never decoded.
struct FrameLayout {
    ConvCode basic_code;
    ConvCode secondary_code;
    int basic_message_bits = 0;
    int secondary_message_bits = 0; // 0 disables the secondary stream
    int repetition = 1;
    BlockInterleaver interleaver; // permutes the repeated secondary stream

    int symbols() const { return basic_code.coded_length(basic_message_bits) / 2; }
    int secondary_slots() const { return 2 * symbols(); }
    int secondary_coded_bits() const {
        return secondary_message_bits > 0
                   ? secondary_code.coded_length(secondary_message_bits)
                   : 0;
    }
    int filler_slots() const {
        return secondary_slots() - repetition * secondary_coded_bits();
    }

    /// Largest secondary message that fits the slot budget; picks the
    /// repetition factor round((1-lambda)^2/lambda^2) when repetition == 0.
    static FrameLayout design(int basic_message_bits, double lambda,
                              const ConvCode& basic_code, const ConvCode& secondary_code,
                              int repetition = 0, const BlockInterleaver& interleaver = {});

    /// Slot stream for one frame: coded secondary bits repeated, interleaved,
    /// then filler bits drawn from `filler`.
    std::vector<uint8_t> build_secondary_slots(std::span<const uint8_t> secondary_coded,
                                               BitSource& filler) const;

    void validate() const;
};

struct LegacyDecodeResult {
    std::vector<uint8_t> raw_bits;     // sign-slicer decisions, 2 per symbol
    std::vector<uint8_t> message_bits; // BCJR hard decisions
};

/// The deployed receiver: knows nothing of the hierarchy. Soft metrics are
/// computed against the four QPSK points at +-d1 and decoded with uniform
/// priors.
LegacyDecodeResult decode_legacy(std::span<const IqSymbol> received, const ConvCode& code,
                                 double sigma, double d1);

struct HierarchicalDecodeResult {
    std::vector<uint8_t> basic_bits;     // hard decisions at the final pass
    std::vector<uint8_t> secondary_bits;
    std::vector<SoftSequence> basic_app_history;     // message APPs per pass
    std::vector<SoftSequence> secondary_app_history; // empty when disabled
};

/// The two-decoder iterative receiver. Pass 0 demaps with uniform priors;
/// pass k re-demaps with the feedback selected by schedule.prior_mode and
/// runs both decoders again. Decisions come from the final pass.
HierarchicalDecodeResult decode_hierarchical(std::span<const IqSymbol> received,
                                             const FrameLayout& layout,
                                             const HierarchyConfig& cfg, double sigma,
                                             const IterationSchedule& schedule);

} // namespace hiermod

#endif
