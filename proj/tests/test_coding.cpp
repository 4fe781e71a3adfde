// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hiermod/coding.hpp"
#include "hiermod/rng.hpp"

using namespace hiermod;

namespace {

const ConvCode kCode75{3, {07, 05}};

// Exhaustive MAP oracle: sums likelihood * prior over every codeword.
// Independent of the trellis recursion it checks.
struct BruteForcePosteriors {
    SoftSequence message_app;
    SoftSequence coded_extrinsic;
};

BruteForcePosteriors brute_force(const SoftSequence& channel_probs, const SoftSequence& priors,
                                 const ConvCode& code) {
    const size_t msg_len = priors.size();
    const size_t coded_len = channel_probs.size();
    std::vector<double> msg_w1(msg_len, 0.0);
    std::vector<double> msg_w0(msg_len, 0.0);
    std::vector<double> ext_w1(coded_len, 0.0);
    std::vector<double> ext_w0(coded_len, 0.0);
    for (uint32_t m = 0; m < (1u << msg_len); ++m) {
        std::vector<uint8_t> message(msg_len);
        double weight = 1.0;
        for (size_t t = 0; t < msg_len; ++t) {
            message[t] = static_cast<uint8_t>((m >> t) & 1u);
            weight *= message[t] ? priors[t].p1 : priors[t].p0;
        }
        const std::vector<uint8_t> coded = conv_encode(message, code);
        for (size_t j = 0; j < coded_len; ++j)
            weight *= coded[j] ? channel_probs[j].p1 : channel_probs[j].p0;
        for (size_t t = 0; t < msg_len; ++t)
            (message[t] ? msg_w1[t] : msg_w0[t]) += weight;
        for (size_t j = 0; j < coded_len; ++j) {
            // extrinsic: remove this bit's own channel factor
            const double obs = coded[j] ? channel_probs[j].p1 : channel_probs[j].p0;
            if (obs == 0.0) continue;
            (coded[j] ? ext_w1[j] : ext_w0[j]) += weight / obs;
        }
    }
    BruteForcePosteriors result;
    for (size_t t = 0; t < msg_len; ++t)
        result.message_app.push_back(SoftBit::from_unnormalized(msg_w1[t], msg_w0[t]));
    for (size_t j = 0; j < coded_len; ++j)
        result.coded_extrinsic.push_back(SoftBit::from_unnormalized(ext_w1[j], ext_w0[j]));
    return result;
}

SoftBit random_soft(SplitMix64& rng) {
    // bounded away from 0 so likelihood ratios stay finite
    const double p = 0.02 + 0.96 * rng.next_unit();
    return {p, 1.0 - p};
}

} // namespace

TEST_CASE("conv_encode of the all-zero message is all zero") {
    const std::vector<uint8_t> message(16, 0);
    for (const ConvCode& code : {kCode75, default_conv_code()}) {
        const auto coded = conv_encode(message, code);
        CHECK(coded.size() == static_cast<size_t>(code.coded_length(16)));
        for (uint8_t bit : coded) CHECK(bit == 0);
    }
}

TEST_CASE("conv_encode impulse response of the (7,5) code") {
    const std::vector<uint8_t> message = {1, 0, 0, 0};
    const auto coded = conv_encode(message, kCode75);
    // impulse response 11 10 11, then the encoder drains to zero
    const std::vector<uint8_t> expected = {1, 1, 1, 0, 1, 1, 0, 0, 0, 0, 0, 0};
    CHECK(coded == expected);
}

TEST_CASE("conv_encode is linear over GF(2)") {
    SplitMix64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint8_t> m1(24);
        std::vector<uint8_t> m2(24);
        std::vector<uint8_t> mx(24);
        for (size_t k = 0; k < m1.size(); ++k) {
            m1[k] = static_cast<uint8_t>(rng.next() & 1u);
            m2[k] = static_cast<uint8_t>(rng.next() & 1u);
            mx[k] = m1[k] ^ m2[k];
        }
        const auto c1 = conv_encode(m1, default_conv_code());
        const auto c2 = conv_encode(m2, default_conv_code());
        const auto cx = conv_encode(mx, default_conv_code());
        for (size_t k = 0; k < cx.size(); ++k) CHECK(cx[k] == (c1[k] ^ c2[k]));
    }
}

TEST_CASE("bcjr saturates on noiseless evidence") {
    const std::vector<uint8_t> message = {1, 0, 1, 1, 0, 0, 1, 0};
    const auto coded = conv_encode(message, kCode75);
    SoftSequence chan(coded.size());
    for (size_t j = 0; j < coded.size(); ++j)
        chan[j] = coded[j] ? SoftBit{1.0 - 1e-12, 1e-12} : SoftBit{1e-12, 1.0 - 1e-12};
    const SoftSequence priors(message.size(), SoftBit::uniform());
    const BcjrResult result = bcjr_decode(chan, priors, kCode75);
    for (size_t t = 0; t < message.size(); ++t) {
        const double p_true = message[t] ? result.message_app[t].p1 : result.message_app[t].p0;
        CHECK(p_true > 1.0 - 1e-6);
    }
}

TEST_CASE("bcjr with uniform evidence stays uniform") {
    const SoftSequence chan(kCode75.coded_length(6), SoftBit::uniform());
    const SoftSequence priors(6, SoftBit::uniform());
    const BcjrResult result = bcjr_decode(chan, priors, kCode75);
    for (const SoftBit& sb : result.message_app) {
        CHECK(sb.p1 == doctest::Approx(0.5).epsilon(1e-12));
    }
}

TEST_CASE("bcjr equals the exhaustive posterior for short messages") {
    SplitMix64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        const size_t msg_len = 2 + rng.next() % 7; // 2..8
        SoftSequence priors(msg_len);
        for (auto& sb : priors) sb = random_soft(rng);
        SoftSequence chan(static_cast<size_t>(kCode75.coded_length(static_cast<int>(msg_len))));
        for (auto& sb : chan) sb = random_soft(rng);

        const BcjrResult bcjr = bcjr_decode(chan, priors, kCode75);
        const BruteForcePosteriors oracle = brute_force(chan, priors, kCode75);
        for (size_t t = 0; t < msg_len; ++t) {
            CHECK(bcjr.message_app[t].p1 == doctest::Approx(oracle.message_app[t].p1).epsilon(1e-9));
            CHECK(bcjr.message_app[t].p1 + bcjr.message_app[t].p0 ==
                  doctest::Approx(1.0).epsilon(1e-9));
        }
        for (size_t j = 0; j < chan.size(); ++j) {
            CHECK(bcjr.coded_extrinsic[j].p1 ==
                  doctest::Approx(oracle.coded_extrinsic[j].p1).epsilon(1e-9));
        }
    }
}

TEST_CASE("bcjr rejects degenerate inputs") {
    SoftSequence chan(kCode75.coded_length(4), SoftBit::uniform());
    SoftSequence priors(4, SoftBit::uniform());
    chan[3] = SoftBit{0.0, 0.0};
    CHECK_THROWS_AS(bcjr_decode(chan, priors, kCode75), std::invalid_argument);
    chan[3] = SoftBit::uniform();
    priors[1] = SoftBit{0.0, 0.0};
    CHECK_THROWS_AS(bcjr_decode(chan, priors, kCode75), std::invalid_argument);
    CHECK_THROWS_AS(bcjr_decode(SoftSequence(3, SoftBit::uniform()), priors, kCode75),
                    std::invalid_argument);
}

TEST_CASE("decoded BER falls off a cliff as CNR grows") {
    // Coded bits ride a +-1 antipodal channel with sigma = 1/sqrt(CNR),
    // the per-dimension geometry of the QPSK layer.
    const ConvCode code = default_conv_code();
    const int msg_len = 20000;
    double prev_ber = 1.0;
    SplitMix64 bit_rng(5);
    GaussianSource noise(77);
    for (double cnr_db : {2.0, 4.0, 6.0, 8.0}) {
        const double sigma = 1.0 / std::sqrt(std::pow(10.0, cnr_db / 10.0));
        std::vector<uint8_t> message(msg_len);
        for (auto& b : message) b = static_cast<uint8_t>(bit_rng.next() & 1u);
        const auto coded = conv_encode(message, code);
        SoftSequence chan(coded.size());
        const double inv_two_var = 1.0 / (2.0 * sigma * sigma);
        for (size_t j = 0; j < coded.size(); ++j) {
            const double y = (coded[j] ? -1.0 : 1.0) + sigma * noise.next();
            const double d1 = y + 1.0; // distance to the "bit 1" point
            const double d0 = y - 1.0;
            const double w1 = std::exp(-d1 * d1 * inv_two_var);
            const double w0 = std::exp(-d0 * d0 * inv_two_var);
            chan[j] = SoftBit::from_unnormalized(w1, w0);
        }
        const SoftSequence priors(message.size(), SoftBit::uniform());
        const BcjrResult result = bcjr_decode(chan, priors, code);
        uint64_t errors = 0;
        for (size_t t = 0; t < message.size(); ++t)
            errors += result.message_app[t].hard() != (message[t] != 0);
        const double ber = static_cast<double>(errors) / msg_len;
        CHECK(ber <= prev_ber);
        prev_ber = ber;
    }
    CHECK(prev_ber < 1e-3);
}

TEST_CASE("repetition combining multiplies likelihoods") {
    const SoftBit one_copy{0.8, 0.2};
    std::vector<SoftBit> copies(3, one_copy);
    const SoftBit combined = combine_repetition(copies);
    const double w1 = 0.8 * 0.8 * 0.8;
    const double w0 = 0.2 * 0.2 * 0.2;
    CHECK(combined.p1 == doctest::Approx(w1 / (w1 + w0)).epsilon(1e-12));

    // a bit and its mirror cancel
    std::vector<SoftBit> cancel = {{0.7, 0.3}, {0.3, 0.7}};
    CHECK(combine_repetition(cancel).p1 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(combine_repetition({}), std::invalid_argument);
}

TEST_CASE("block interleaver permutes blocks and round-trips") {
    const BlockInterleaver identity;
    CHECK(identity.identity());
    const std::vector<uint8_t> data = {0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
    CHECK(identity.interleave(std::span<const uint8_t>(data)) == data);

    const BlockInterleaver il{2, 3};
    // one full 2x3 block (write row-major, read column-major) plus a
    // passthrough tail
    const auto far = il.interleave(std::span<const uint8_t>(data));
    const std::vector<uint8_t> expected = {0, 3, 1, 4, 2, 5, 6, 7, 8, 9};
    CHECK(far == expected);
    CHECK(il.deinterleave(std::span<const uint8_t>(far)) == data);

    // permutation is a bijection for awkward lengths
    const auto perm = il.permutation(17);
    std::vector<bool> seen(perm.size(), false);
    for (uint32_t p : perm) {
        CHECK(p < perm.size());
        CHECK_FALSE(seen[p]);
        seen[p] = true;
    }
}

TEST_CASE("code validation") {
    const ConvCode short_k{1, {07, 05}};
    const ConvCode one_tap{3, {07}};
    const ConvCode wide_tap{3, {017, 05}};
    const ConvCode zero_tap{3, {00, 05}};
    const ConvCode nine_taps{3, {07, 05, 07, 05, 07, 05, 07, 05, 07}};
    CHECK_THROWS_AS(short_k.validate(), std::invalid_argument);
    CHECK_THROWS_AS(one_tap.validate(), std::invalid_argument);
    CHECK_THROWS_AS(wide_tap.validate(), std::invalid_argument);
    CHECK_THROWS_AS(zero_tap.validate(), std::invalid_argument);
    CHECK_THROWS_AS(nine_taps.validate(), std::invalid_argument);
    CHECK_NOTHROW(kCode75.validate());
    CHECK_NOTHROW(default_conv_code().validate());
}
