// SPDX-License-Identifier: Apache-2.0
#include "hiermod/montecarlo.hpp"

#include <cmath>
#include <stdexcept>
#include <thread>

namespace hiermod {

double Counter::ci95_halfwidth() const {
    if (bits == 0) return 0.0;
    const double p = ber();
    return 1.96 * std::sqrt(p * (1.0 - p) / static_cast<double>(bits));
}

namespace {

void merge_iteration_counters(std::vector<Counter>& into, const std::vector<Counter>& from) {
    if (into.size() < from.size()) into.resize(from.size());
    for (size_t k = 0; k < from.size(); ++k) into[k] += from[k];
}

} // namespace

LinkStats& LinkStats::operator+=(const LinkStats& o) {
    legacy_raw_basic += o.legacy_raw_basic;
    legacy_coded_basic += o.legacy_coded_basic;
    secondary_raw += o.secondary_raw;
    basic_raw_given_s0 += o.basic_raw_given_s0;
    basic_raw_given_s1 += o.basic_raw_given_s1;
    merge_iteration_counters(coded_basic, o.coded_basic);
    merge_iteration_counters(coded_secondary, o.coded_secondary);
    return *this;
}

void RunSpec::validate() const {
    if (operating_points.empty())
        throw std::invalid_argument("RunSpec: no operating points");
    for (const auto& pt : operating_points) pt.validate();
    if (frames < 1)
        throw std::invalid_argument("RunSpec: at least one frame required");
    if (frame_message_bits < 8)
        throw std::invalid_argument("RunSpec: at least 8 message bits per frame required");
    schedule.validate();
    basic_code.validate();
    secondary_code.validate();
    if (workers < 1)
        throw std::invalid_argument("RunSpec: at least one worker required");
}

namespace {

struct FrameContext {
    const RunSpec& spec;
    const analytic::OperatingPoint& point;
    const FrameLayout& layout;
    const HierarchyConfig& cfg;
    double sigma;        // receiver-side noise deviation
    uint64_t point_seed; // derived from (spec.seed, point index)
};

uint64_t count_bit_errors(std::span<const uint8_t> a, std::span<const uint8_t> b) {
    uint64_t errors = 0;
    for (size_t k = 0; k < a.size(); ++k) errors += a[k] != b[k];
    return errors;
}

std::vector<uint8_t> random_bits(size_t count, BitSource& src) {
    std::vector<uint8_t> bits(count);
    for (auto& b : bits) b = static_cast<uint8_t>(src.next_bit());
    return bits;
}

// One frame end to end. All randomness comes from substreams keyed on the
// absolute frame index, so partitioning across workers cannot change results.
void run_frame(const FrameContext& ctx, uint64_t frame_index, LinkStats& stats) {
    BitSource bits = BitSource::substream(ctx.point_seed, 2 * frame_index);
    GaussianSource noise = GaussianSource::substream(ctx.point_seed, 2 * frame_index + 1);

    const auto basic_msg = random_bits(static_cast<size_t>(ctx.layout.basic_message_bits), bits);
    const auto basic_coded = conv_encode(basic_msg, ctx.layout.basic_code);

    const bool secondary_enabled = ctx.layout.secondary_message_bits > 0;
    std::vector<uint8_t> sec_msg;
    std::vector<uint8_t> slots;
    if (secondary_enabled) {
        sec_msg = random_bits(static_cast<size_t>(ctx.layout.secondary_message_bits), bits);
        const auto sec_coded = conv_encode(sec_msg, ctx.layout.secondary_code);
        slots = ctx.layout.build_secondary_slots(sec_coded, bits);
    } else {
        slots = random_bits(static_cast<size_t>(ctx.layout.secondary_slots()), bits);
    }

    const size_t n_symbols = static_cast<size_t>(ctx.layout.symbols());
    std::vector<IqSymbol> received(n_symbols);
    for (size_t t = 0; t < n_symbols; ++t) {
        const BitQuad quad{basic_coded[2 * t], basic_coded[2 * t + 1], slots[2 * t],
                           slots[2 * t + 1]};
        const IqSymbol x = map_hierarchical(quad, ctx.cfg);
        received[t] = ctx.spec.zero_noise ? x : add_noise(x, ctx.sigma, noise);
    }

    // Legacy receiver: raw slicer statistics split by the secondary bit
    // sharing the dimension, then the coded message.
    const LegacyDecodeResult legacy =
        decode_legacy(received, ctx.layout.basic_code, ctx.sigma, ctx.cfg.d1);
    stats.legacy_raw_basic.bits += legacy.raw_bits.size();
    for (size_t j = 0; j < legacy.raw_bits.size(); ++j) {
        const bool error = legacy.raw_bits[j] != basic_coded[j];
        stats.legacy_raw_basic.errors += error;
        Counter& cond = slots[j] ? stats.basic_raw_given_s1 : stats.basic_raw_given_s0;
        ++cond.bits;
        cond.errors += error;
    }
    stats.legacy_coded_basic.bits += basic_msg.size();
    stats.legacy_coded_basic.errors += count_bit_errors(legacy.message_bits, basic_msg);

    // Hard-demap secondary error rate; undecidable at lambda = 0.
    if (ctx.cfg.lambda > 0.0) {
        for (size_t t = 0; t < n_symbols; ++t) {
            const BitQuad hard = demap_hard(received[t], ctx.cfg);
            stats.secondary_raw.bits += 2;
            stats.secondary_raw.errors += hard.s_i != slots[2 * t];
            stats.secondary_raw.errors += hard.s_q != slots[2 * t + 1];
        }
    }

    // Hierarchical receiver, one entry per decoding pass.
    const HierarchicalDecodeResult hier =
        decode_hierarchical(received, ctx.layout, ctx.cfg, ctx.sigma, ctx.spec.schedule);
    if (stats.coded_basic.size() < hier.basic_app_history.size())
        stats.coded_basic.resize(hier.basic_app_history.size());
    for (size_t k = 0; k < hier.basic_app_history.size(); ++k) {
        stats.coded_basic[k].bits += basic_msg.size();
        for (size_t j = 0; j < basic_msg.size(); ++j)
            stats.coded_basic[k].errors += hier.basic_app_history[k][j].hard() != (basic_msg[j] != 0);
    }
    if (secondary_enabled) {
        if (stats.coded_secondary.size() < hier.secondary_app_history.size())
            stats.coded_secondary.resize(hier.secondary_app_history.size());
        for (size_t k = 0; k < hier.secondary_app_history.size(); ++k) {
            stats.coded_secondary[k].bits += sec_msg.size();
            for (size_t j = 0; j < sec_msg.size(); ++j)
                stats.coded_secondary[k].errors +=
                    hier.secondary_app_history[k][j].hard() != (sec_msg[j] != 0);
        }
    }
}

LinkStats run_point(const RunSpec& spec, size_t point_index) {
    const analytic::OperatingPoint& point = spec.operating_points[point_index];
    const HierarchyConfig cfg{point.lambda, 1.0, spec.mapping};
    const FrameLayout layout =
        FrameLayout::design(static_cast<int>(spec.frame_message_bits), point.lambda,
                            spec.basic_code, spec.secondary_code,
                            static_cast<int>(spec.repetition), spec.interleaver);
    const ChannelSpec channel(point.cnr_db, cfg, spec.seed);
    const FrameContext ctx{spec, point, layout, cfg, noise_sigma(channel),
                           SplitMix64::derive(spec.seed, point_index)};

    const uint32_t workers = std::min(spec.workers, spec.frames);
    std::vector<LinkStats> partial(workers);
    auto work = [&](uint32_t w) {
        for (uint64_t f = spec.first_frame + w; f < spec.first_frame + spec.frames; f += workers)
            run_frame(ctx, f, partial[w]);
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (uint32_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    LinkStats stats;
    for (const LinkStats& p : partial) stats += p;
    // A disabled secondary stream leaves zero-bit counters so per-pass
    // indexing stays uniform across operating points.
    if (stats.coded_secondary.size() < stats.coded_basic.size())
        stats.coded_secondary.resize(stats.coded_basic.size());
    return stats;
}

} // namespace

std::vector<std::pair<analytic::OperatingPoint, LinkStats>> simulate(const RunSpec& spec) {
    spec.validate();
    std::vector<std::pair<analytic::OperatingPoint, LinkStats>> results;
    results.reserve(spec.operating_points.size());
    for (size_t p = 0; p < spec.operating_points.size(); ++p)
        results.emplace_back(spec.operating_points[p], run_point(spec, p));
    return results;
}

double empirical_mnr(double lambda, double cnr_db, uint64_t symbols, uint64_t seed,
                     Mapping mapping) {
    if (symbols == 0)
        throw std::invalid_argument("empirical_mnr: at least one symbol required");
    const HierarchyConfig cfg{lambda, 1.0, mapping};
    const ChannelSpec channel(cnr_db, cfg, seed);
    const double sigma = noise_sigma(channel);
    BitSource bits = BitSource::substream(seed, 0);
    GaussianSource noise = GaussianSource::substream(seed, 1);
    double sq_deviation = 0.0;
    for (uint64_t k = 0; k < symbols; ++k) {
        const BitQuad quad{static_cast<uint8_t>(bits.next_bit()),
                           static_cast<uint8_t>(bits.next_bit()),
                           static_cast<uint8_t>(bits.next_bit()),
                           static_cast<uint8_t>(bits.next_bit())};
        const IqSymbol y = add_noise(map_hierarchical(quad, cfg), sigma, noise);
        // Deviation from the transmitted quadrant's QPSK center: channel
        // noise plus the secondary scatter, exactly the MNR noise term.
        const IqSymbol center = map_qpsk(quad.b_i, quad.b_q, cfg);
        sq_deviation += (y.i - center.i) * (y.i - center.i) + (y.q - center.q) * (y.q - center.q);
    }
    const double mean_noise_power = sq_deviation / static_cast<double>(symbols);
    return 2.0 * cfg.d1 * cfg.d1 / mean_noise_power;
}

} // namespace hiermod
