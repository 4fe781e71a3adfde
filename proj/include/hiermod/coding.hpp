// SPDX-License-Identifier: Apache-2.0
#ifndef HIERMOD_CODING_HPP
#define HIERMOD_CODING_HPP

#include <cstdint>
#include <span>
#include <vector>

namespace hiermod {

/// Rate-1/n binary convolutional code with zero-tail termination. Generators
/// are given as the usual octal tap masks; the mask MSB taps the current
/// input bit.
struct ConvCode {
    int constraint_length = 7;
    std::vector<uint32_t> generators = {0171, 0133};

    int output_bits() const { return static_cast<int>(generators.size()); }
    int tail_bits() const { return constraint_length - 1; }
    int states() const { return 1 << (constraint_length - 1); }
    int coded_length(int message_bits) const {
        return output_bits() * (message_bits + tail_bits());
    }
    void validate() const;
};

/// The de-facto deployed-satellite inner code: rate 1/2, K=7, (171,133) octal.
inline ConvCode default_conv_code() { return ConvCode{}; }

/// Per-bit probability pair, kept normalized (p1 + p0 = 1).
struct SoftBit {
    double p1 = 0.5;
    double p0 = 0.5;

    static SoftBit uniform() { return {0.5, 0.5}; }
    static SoftBit from_unnormalized(double w1, double w0);

    bool hard() const { return p1 > p0; }
};

using SoftSequence = std::vector<SoftBit>;

/// Zero-tail convolutional encoding; output length n*(message + K - 1).
std::vector<uint8_t> conv_encode(std::span<const uint8_t> message, const ConvCode& code);

struct BcjrResult {
    SoftSequence message_app;    // posterior per message bit
    SoftSequence coded_app;      // posterior per coded bit (tail included)
    SoftSequence coded_extrinsic; // coded posterior with the direct channel
                                  // observation divided out
};

/// Exact a-posteriori (BCJR) decoding over the zero-tail trellis. Forward
/// and backward recursions are normalized every step. channel_probs holds one
/// SoftBit per coded bit, priors one per message bit; a SoftBit with both
/// probabilities zero is rejected.
BcjrResult bcjr_decode(const SoftSequence& channel_probs, const SoftSequence& priors,
                       const ConvCode& code);

/// Combines the R soft observations of one repeated bit: product of
/// likelihoods, renormalized.
SoftBit combine_repetition(std::span<const SoftBit> copies);

/// Row/column block permutation of a bit or soft stream; rows == 1 or
/// cols == 1 is the identity. A trailing partial block is passed through
/// unpermuted.
struct BlockInterleaver {
    uint32_t rows = 1;
    uint32_t cols = 1;

    bool identity() const { return rows <= 1 || cols <= 1; }
    std::vector<uint32_t> permutation(uint32_t length) const;

    template <typename T>
    std::vector<T> interleave(std::span<const T> in) const {
        auto perm = permutation(static_cast<uint32_t>(in.size()));
        std::vector<T> out(in.size());
        for (size_t k = 0; k < in.size(); ++k) out[perm[k]] = in[k];
        return out;
    }

    template <typename T>
    std::vector<T> deinterleave(std::span<const T> in) const {
        auto perm = permutation(static_cast<uint32_t>(in.size()));
        std::vector<T> out(in.size());
        for (size_t k = 0; k < in.size(); ++k) out[k] = in[perm[k]];
        return out;
    }
};

} // namespace hiermod

#endif
