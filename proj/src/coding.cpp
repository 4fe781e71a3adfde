// SPDX-License-Identifier: Apache-2.0
#include "hiermod/coding.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace hiermod {

void ConvCode::validate() const {
    if (constraint_length < 2)
        throw std::invalid_argument("ConvCode: constraint length must be >= 2");
    if (constraint_length > 16)
        throw std::invalid_argument("ConvCode: constraint length above 16 is unsupported");
    if (generators.size() < 2)
        throw std::invalid_argument("ConvCode: at least two generators required");
    if (generators.size() > 8)
        throw std::invalid_argument("ConvCode: more than 8 generators is unsupported");
    const uint32_t mask = (1u << constraint_length) - 1u;
    for (uint32_t g : generators) {
        if (g == 0 || (g & ~mask) != 0)
            throw std::invalid_argument("ConvCode: generator does not fit the constraint length");
    }
}

SoftBit SoftBit::from_unnormalized(double w1, double w0) {
    const double sum = w1 + w0;
    if (!(sum > 0.0) || !std::isfinite(sum))
        throw std::invalid_argument("SoftBit: weights must be nonnegative with a positive sum");
    return {w1 / sum, w0 / sum};
}

namespace {

// Tap mask MSB is the current input: window = input << (K-1) | state,
// next state = window >> 1.
inline int output_bit(uint32_t generator, uint32_t window) {
    return std::popcount(generator & window) & 1;
}

struct Trellis {
    int states;
    int n;
    // [state][input] -> next state, output bits packed LSB-first
    std::vector<std::array<uint32_t, 2>> next;
    std::vector<std::array<uint32_t, 2>> out;

    explicit Trellis(const ConvCode& code)
        : states(code.states()), n(code.output_bits()),
          next(static_cast<size_t>(states)), out(static_cast<size_t>(states)) {
        for (int s = 0; s < states; ++s) {
            for (uint32_t b = 0; b < 2; ++b) {
                const uint32_t window =
                    (b << (code.constraint_length - 1)) | static_cast<uint32_t>(s);
                uint32_t bits = 0;
                for (int j = 0; j < n; ++j)
                    bits |= static_cast<uint32_t>(output_bit(code.generators[static_cast<size_t>(j)], window)) << j;
                next[static_cast<size_t>(s)][b] = window >> 1;
                out[static_cast<size_t>(s)][b] = bits;
            }
        }
    }
};

} // namespace

std::vector<uint8_t> conv_encode(std::span<const uint8_t> message, const ConvCode& code) {
    code.validate();
    if (message.empty())
        throw std::invalid_argument("conv_encode: message must be non-empty");
    const Trellis trellis(code);
    const size_t total = message.size() + static_cast<size_t>(code.tail_bits());
    std::vector<uint8_t> coded;
    coded.reserve(total * static_cast<size_t>(trellis.n));
    uint32_t state = 0;
    for (size_t t = 0; t < total; ++t) {
        const uint32_t b = t < message.size() ? (message[t] & 1u) : 0u;
        const uint32_t bits = trellis.out[state][b];
        for (int j = 0; j < trellis.n; ++j)
            coded.push_back(static_cast<uint8_t>((bits >> j) & 1u));
        state = trellis.next[state][b];
    }
    return coded;
}

BcjrResult bcjr_decode(const SoftSequence& channel_probs, const SoftSequence& priors,
                       const ConvCode& code) {
    code.validate();
    const int n = code.output_bits();
    const size_t msg_len = priors.size();
    const size_t steps = msg_len + static_cast<size_t>(code.tail_bits());
    if (channel_probs.size() != steps * static_cast<size_t>(n))
        throw std::invalid_argument("bcjr_decode: channel probability length mismatch");
    for (const SoftBit& sb : channel_probs)
        if (!(sb.p0 > 0.0 || sb.p1 > 0.0))
            throw std::invalid_argument("bcjr_decode: degenerate channel probability");
    for (const SoftBit& sb : priors)
        if (!(sb.p0 > 0.0 || sb.p1 > 0.0))
            throw std::invalid_argument("bcjr_decode: degenerate prior");

    const Trellis trellis(code);
    const int S = trellis.states;

    auto chan = [&](size_t t, int j, uint32_t bit) {
        const SoftBit& sb = channel_probs[t * static_cast<size_t>(n) + static_cast<size_t>(j)];
        return bit ? sb.p1 : sb.p0;
    };
    auto branch = [&](size_t t, int s, uint32_t b) {
        double g = 1.0;
        const uint32_t bits = trellis.out[static_cast<size_t>(s)][b];
        for (int j = 0; j < n; ++j) g *= chan(t, j, (bits >> j) & 1u);
        if (t < msg_len) g *= b ? priors[t].p1 : priors[t].p0;
        return g;
    };

    // Forward/backward in the normalized linear domain: every step is scaled
    // to sum 1, which keeps the products in range for any block length.
    std::vector<std::vector<double>> alpha(steps + 1, std::vector<double>(static_cast<size_t>(S), 0.0));
    std::vector<std::vector<double>> beta(steps + 1, std::vector<double>(static_cast<size_t>(S), 0.0));
    alpha[0][0] = 1.0;
    for (size_t t = 0; t < steps; ++t) {
        const int inputs = t < msg_len ? 2 : 1; // tail forces input 0
        double sum = 0.0;
        for (int s = 0; s < S; ++s) {
            const double a = alpha[t][static_cast<size_t>(s)];
            if (a == 0.0) continue;
            for (int b = 0; b < inputs; ++b) {
                const double m = a * branch(t, s, static_cast<uint32_t>(b));
                alpha[t + 1][trellis.next[static_cast<size_t>(s)][static_cast<size_t>(b)]] += m;
                sum += m;
            }
        }
        if (!(sum > 0.0))
            throw std::runtime_error("bcjr_decode: forward recursion vanished");
        for (double& v : alpha[t + 1]) v /= sum;
    }

    beta[steps][0] = 1.0; // zero tail pins the final state
    for (size_t t = steps; t-- > 0;) {
        const int inputs = t < msg_len ? 2 : 1;
        double sum = 0.0;
        for (int s = 0; s < S; ++s) {
            double v = 0.0;
            for (int b = 0; b < inputs; ++b)
                v += branch(t, s, static_cast<uint32_t>(b)) *
                     beta[t + 1][trellis.next[static_cast<size_t>(s)][static_cast<size_t>(b)]];
            beta[t][static_cast<size_t>(s)] = v;
            sum += v;
        }
        if (!(sum > 0.0))
            throw std::runtime_error("bcjr_decode: backward recursion vanished");
        for (double& v : beta[t]) v /= sum;
    }

    BcjrResult result;
    result.message_app.resize(msg_len);
    result.coded_app.resize(channel_probs.size());
    result.coded_extrinsic.resize(channel_probs.size());
    for (size_t t = 0; t < steps; ++t) {
        const int inputs = t < msg_len ? 2 : 1;
        double msg_w[2] = {0.0, 0.0};
        std::array<double, 2> coded_w[8]; // n <= 8 outputs per step
        for (int j = 0; j < n; ++j) coded_w[j] = {0.0, 0.0};
        for (int s = 0; s < S; ++s) {
            const double a = alpha[t][static_cast<size_t>(s)];
            if (a == 0.0) continue;
            for (int b = 0; b < inputs; ++b) {
                const double m = a * branch(t, s, static_cast<uint32_t>(b)) *
                                 beta[t + 1][trellis.next[static_cast<size_t>(s)][static_cast<size_t>(b)]];
                if (m == 0.0) continue;
                msg_w[b] += m;
                const uint32_t bits = trellis.out[static_cast<size_t>(s)][static_cast<size_t>(b)];
                for (int j = 0; j < n; ++j) coded_w[j][(bits >> j) & 1u] += m;
            }
        }
        if (t < msg_len)
            result.message_app[t] = SoftBit::from_unnormalized(msg_w[1], msg_w[0]);
        for (int j = 0; j < n; ++j) {
            const size_t idx = t * static_cast<size_t>(n) + static_cast<size_t>(j);
            const SoftBit app = SoftBit::from_unnormalized(coded_w[j][1], coded_w[j][0]);
            result.coded_app[idx] = app;
            // Divide out the direct observation of this bit; floor to keep
            // the ratio finite when the posterior saturates.
            const SoftBit& ch = channel_probs[idx];
            const double e1 = app.p1 / std::max(ch.p1, 1e-300);
            const double e0 = app.p0 / std::max(ch.p0, 1e-300);
            result.coded_extrinsic[idx] = SoftBit::from_unnormalized(e1, e0);
        }
    }
    return result;
}

SoftBit combine_repetition(std::span<const SoftBit> copies) {
    if (copies.empty())
        throw std::invalid_argument("combine_repetition: no observations");
    // Product of likelihoods in the log domain, renormalized once.
    double l1 = 0.0;
    double l0 = 0.0;
    for (const SoftBit& sb : copies) {
        l1 += std::log(std::max(sb.p1, 1e-300));
        l0 += std::log(std::max(sb.p0, 1e-300));
    }
    const double m = std::max(l1, l0);
    return SoftBit::from_unnormalized(std::exp(l1 - m), std::exp(l0 - m));
}

std::vector<uint32_t> BlockInterleaver::permutation(uint32_t length) const {
    std::vector<uint32_t> perm(length);
    if (identity()) {
        for (uint32_t k = 0; k < length; ++k) perm[k] = k;
        return perm;
    }
    const uint32_t block = rows * cols;
    uint32_t base = 0;
    for (; base + block <= length; base += block) {
        // Write row-major, read column-major.
        for (uint32_t r = 0; r < rows; ++r)
            for (uint32_t c = 0; c < cols; ++c)
                perm[base + r * cols + c] = base + c * rows + r;
    }
    for (; base < length; ++base) perm[base] = base;
    return perm;
}

} // namespace hiermod
