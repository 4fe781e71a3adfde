// SPDX-License-Identifier: Apache-2.0
#include "hiermod/receiver.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hiermod {

double gaussian_density(double x, double sigma) {
    if (!(sigma > 0.0))
        throw std::invalid_argument("gaussian_density: sigma must be positive");
    return std::exp(-x * x / (2.0 * sigma * sigma)) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

void IterationSchedule::validate() const {
    if (max_iterations < 1)
        throw std::invalid_argument("IterationSchedule: at least one pass required");
}

namespace {

constexpr double kProbFloor = 1e-300;

double safe_log(double p) { return std::log(std::max(p, kProbFloor)); }

SoftBit softbit_from_logs(double l1, double l0) {
    const double m = std::max(l1, l0);
    return SoftBit::from_unnormalized(std::exp(l1 - m), std::exp(l0 - m));
}

double log_sum_exp(double a, double b) {
    const double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct DimSoft {
    SoftBit basic;
    SoftBit secondary;
};

// One dimension of the marginalizing demapper, in the log domain. The
// normalization constant of the Gaussian density cancels.
DimSoft demap_dimension(double y, const SoftBit& prior_b, const SoftBit& prior_s,
                        const HierarchyConfig& cfg, Dim dim, double inv_two_sigma_sq) {
    double logf[2][2]; // [basic][secondary]
    for (int b = 0; b < 2; ++b) {
        for (int s = 0; s < 2; ++s) {
            const double d = y - dimension_amplitude(b, s, cfg, dim);
            logf[b][s] = -d * d * inv_two_sigma_sq;
        }
    }
    const double lps1 = safe_log(prior_s.p1);
    const double lps0 = safe_log(prior_s.p0);
    const double lpb1 = safe_log(prior_b.p1);
    const double lpb0 = safe_log(prior_b.p0);
    // P(y|x_b) marginalizes the secondary prior, P(y|x_s) the basic prior.
    const double lb1 = log_sum_exp(lps1 + logf[1][1], lps0 + logf[1][0]);
    const double lb0 = log_sum_exp(lps1 + logf[0][1], lps0 + logf[0][0]);
    const double ls1 = log_sum_exp(lpb1 + logf[1][1], lpb0 + logf[0][1]);
    const double ls0 = log_sum_exp(lpb1 + logf[1][0], lpb0 + logf[0][0]);
    return {softbit_from_logs(lb1, lb0), softbit_from_logs(ls1, ls0)};
}

} // namespace

SoftDemapResult demap_soft(const IqSymbol& y,
                           const std::array<SoftBit, 2>& priors_basic,
                           const std::array<SoftBit, 2>& priors_secondary,
                           const HierarchyConfig& cfg, double sigma) {
    cfg.validate();
    if (!(sigma > 0.0))
        throw std::invalid_argument("demap_soft: sigma must be positive");
    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
    const DimSoft di =
        demap_dimension(y.i, priors_basic[0], priors_secondary[0], cfg, Dim::I, inv_two_sigma_sq);
    const DimSoft dq =
        demap_dimension(y.q, priors_basic[1], priors_secondary[1], cfg, Dim::Q, inv_two_sigma_sq);
    return {{di.basic, dq.basic}, {di.secondary, dq.secondary}};
}

DemapperOutput demap_frame(std::span<const IqSymbol> received,
                           std::span<const SoftBit> priors_basic,
                           std::span<const SoftBit> priors_secondary,
                           const HierarchyConfig& cfg, double sigma) {
    if (priors_basic.size() != 2 * received.size() ||
        priors_secondary.size() != 2 * received.size())
        throw std::invalid_argument("demap_frame: prior length mismatch");
    DemapperOutput out;
    out.basic_channel_probs.resize(2 * received.size());
    out.secondary_channel_probs.resize(2 * received.size());
    for (size_t t = 0; t < received.size(); ++t) {
        const SoftDemapResult r = demap_soft(
            received[t], {priors_basic[2 * t], priors_basic[2 * t + 1]},
            {priors_secondary[2 * t], priors_secondary[2 * t + 1]}, cfg, sigma);
        out.basic_channel_probs[2 * t] = r.basic[0];
        out.basic_channel_probs[2 * t + 1] = r.basic[1];
        out.secondary_channel_probs[2 * t] = r.secondary[0];
        out.secondary_channel_probs[2 * t + 1] = r.secondary[1];
    }
    return out;
}

FrameLayout FrameLayout::design(int basic_message_bits, double lambda,
                                const ConvCode& basic_code, const ConvCode& secondary_code,
                                int repetition, const BlockInterleaver& interleaver) {
    basic_code.validate();
    secondary_code.validate();
    if (basic_message_bits < 8)
        throw std::invalid_argument("FrameLayout: at least 8 basic message bits required");
    FrameLayout layout;
    layout.basic_code = basic_code;
    layout.secondary_code = secondary_code;
    layout.basic_message_bits = basic_message_bits;
    layout.interleaver = interleaver;
    if (lambda <= 0.0) {
        // Plain QPSK: no secondary stream, every slot is filler.
        layout.secondary_message_bits = 0;
        layout.repetition = 1;
        return layout;
    }
    if (repetition <= 0) {
        const double r = (1.0 - lambda) / lambda;
        repetition = std::max(1, static_cast<int>(std::lround(r * r)));
    }
    layout.repetition = repetition;
    const int capacity = layout.secondary_slots() / repetition;
    const int message = capacity / secondary_code.output_bits() - secondary_code.tail_bits();
    if (message < 1)
        throw std::invalid_argument(
            "FrameLayout: repetition factor leaves no room for a secondary message; "
            "increase the frame size or lower the repetition");
    layout.secondary_message_bits = message;
    return layout;
}

void FrameLayout::validate() const {
    basic_code.validate();
    secondary_code.validate();
    if (basic_message_bits < 8)
        throw std::invalid_argument("FrameLayout: at least 8 basic message bits required");
    if (repetition < 1)
        throw std::invalid_argument("FrameLayout: repetition must be >= 1");
    if (secondary_message_bits < 0 || filler_slots() < 0)
        throw std::invalid_argument("FrameLayout: secondary stream exceeds the slot budget");
}

std::vector<uint8_t> FrameLayout::build_secondary_slots(std::span<const uint8_t> secondary_coded,
                                                        BitSource& filler) const {
    if (static_cast<int>(secondary_coded.size()) != secondary_coded_bits())
        throw std::invalid_argument("build_secondary_slots: coded length mismatch");
    std::vector<uint8_t> repeated;
    repeated.reserve(secondary_coded.size() * static_cast<size_t>(repetition));
    for (uint8_t bit : secondary_coded)
        repeated.insert(repeated.end(), static_cast<size_t>(repetition), bit);
    std::vector<uint8_t> slots =
        interleaver.interleave(std::span<const uint8_t>(repeated));
    slots.reserve(static_cast<size_t>(secondary_slots()));
    while (slots.size() < static_cast<size_t>(secondary_slots()))
        slots.push_back(static_cast<uint8_t>(filler.next_bit()));
    return slots;
}

LegacyDecodeResult decode_legacy(std::span<const IqSymbol> received, const ConvCode& code,
                                 double sigma, double d1) {
    code.validate();
    if (received.empty())
        throw std::invalid_argument("decode_legacy: no symbols");
    if (!(sigma > 0.0) || !(d1 > 0.0))
        throw std::invalid_argument("decode_legacy: sigma and d1 must be positive");
    LegacyDecodeResult result;
    result.raw_bits.reserve(2 * received.size());
    SoftSequence chan(2 * received.size());
    const double inv_two_sigma_sq = 1.0 / (2.0 * sigma * sigma);
    for (size_t t = 0; t < received.size(); ++t) {
        const LegacyBits raw = demap_legacy(received[t]);
        result.raw_bits.push_back(raw.b_i);
        result.raw_bits.push_back(raw.b_q);
        // The deployed receiver's metric assumes pure QPSK points at +-d1.
        const double amps[2] = {received[t].i, received[t].q};
        for (int dim = 0; dim < 2; ++dim) {
            const double dtp = amps[dim] - d1;
            const double dtm = amps[dim] + d1;
            chan[2 * t + static_cast<size_t>(dim)] =
                softbit_from_logs(-dtm * dtm * inv_two_sigma_sq, -dtp * dtp * inv_two_sigma_sq);
        }
    }
    const int msg_len =
        static_cast<int>(chan.size()) / code.output_bits() - code.tail_bits();
    if (msg_len < 1)
        throw std::invalid_argument("decode_legacy: frame shorter than the code tail");
    const SoftSequence priors(static_cast<size_t>(msg_len), SoftBit::uniform());
    const BcjrResult dec = bcjr_decode(chan, priors, code);
    result.message_bits.reserve(dec.message_app.size());
    for (const SoftBit& sb : dec.message_app)
        result.message_bits.push_back(static_cast<uint8_t>(sb.hard()));
    return result;
}

namespace {

SoftBit scaled_by_prior(const SoftBit& chan, const SoftBit& prior) {
    return SoftBit::from_unnormalized(chan.p1 * std::max(prior.p1, kProbFloor),
                                      chan.p0 * std::max(prior.p0, kProbFloor));
}

} // namespace

HierarchicalDecodeResult decode_hierarchical(std::span<const IqSymbol> received,
                                             const FrameLayout& layout,
                                             const HierarchyConfig& cfg, double sigma,
                                             const IterationSchedule& schedule) {
    layout.validate();
    cfg.validate();
    schedule.validate();
    if (!(sigma > 0.0))
        throw std::invalid_argument("decode_hierarchical: sigma must be positive");
    if (static_cast<int>(received.size()) != layout.symbols())
        throw std::invalid_argument("decode_hierarchical: symbol count does not match the layout");

    const size_t slots = static_cast<size_t>(layout.secondary_slots());
    const size_t sec_coded = static_cast<size_t>(layout.secondary_coded_bits());
    const bool secondary_enabled = layout.secondary_message_bits > 0;
    const size_t rep = static_cast<size_t>(layout.repetition);
    const auto perm = layout.interleaver.permutation(static_cast<uint32_t>(sec_coded * rep));

    SoftSequence prior_b(2 * received.size(), SoftBit::uniform());
    SoftSequence prior_s(slots, SoftBit::uniform());
    const SoftSequence msg_priors_b(static_cast<size_t>(layout.basic_message_bits),
                                    SoftBit::uniform());
    const SoftSequence msg_priors_s(static_cast<size_t>(layout.secondary_message_bits),
                                    SoftBit::uniform());

    HierarchicalDecodeResult result;
    SoftSequence prev_basic_app;
    SoftSequence prev_sec_app;

    for (int pass = 0; pass < schedule.max_iterations; ++pass) {
        DemapperOutput dm = demap_frame(received, prior_b, prior_s, cfg, sigma);

        SoftSequence basic_chan = std::move(dm.basic_channel_probs);
        if (schedule.prior_mode == PriorMode::FullApp && pass > 0) {
            // Full-APP exchange also hands each decoder its own previous
            // APP as the prior on its own coded bits.
            for (size_t j = 0; j < basic_chan.size(); ++j)
                basic_chan[j] = scaled_by_prior(basic_chan[j], prev_basic_app[j]);
        }
        const BcjrResult rb = bcjr_decode(basic_chan, msg_priors_b, layout.basic_code);
        result.basic_app_history.push_back(rb.message_app);

        BcjrResult rs;
        if (secondary_enabled) {
            SoftSequence sec_chan(sec_coded);
            std::vector<SoftBit> copies(rep);
            for (size_t c = 0; c < sec_coded; ++c) {
                for (size_t r = 0; r < rep; ++r)
                    copies[r] = dm.secondary_channel_probs[perm[c * rep + r]];
                sec_chan[c] = combine_repetition(copies);
            }
            if (schedule.prior_mode == PriorMode::FullApp && pass > 0) {
                for (size_t c = 0; c < sec_coded; ++c)
                    sec_chan[c] = scaled_by_prior(sec_chan[c], prev_sec_app[c]);
            }
            rs = bcjr_decode(sec_chan, msg_priors_s, layout.secondary_code);
            result.secondary_app_history.push_back(rs.message_app);
        }

        if (pass + 1 < schedule.max_iterations) {
            const bool extrinsic = schedule.prior_mode == PriorMode::Extrinsic;
            prior_b = extrinsic ? rb.coded_extrinsic : rb.coded_app;
            if (secondary_enabled) {
                const SoftSequence& fb = extrinsic ? rs.coded_extrinsic : rs.coded_app;
                for (size_t c = 0; c < sec_coded; ++c)
                    for (size_t r = 0; r < rep; ++r)
                        prior_s[perm[c * rep + r]] = fb[c];
            }
            if (schedule.prior_mode == PriorMode::FullApp) {
                prev_basic_app = rb.coded_app;
                if (secondary_enabled) prev_sec_app = rs.coded_app;
            }
        }
    }

    for (const SoftBit& sb : result.basic_app_history.back())
        result.basic_bits.push_back(static_cast<uint8_t>(sb.hard()));
    if (secondary_enabled)
        for (const SoftBit& sb : result.secondary_app_history.back())
            result.secondary_bits.push_back(static_cast<uint8_t>(sb.hard()));
    return result;
}

} // namespace hiermod
