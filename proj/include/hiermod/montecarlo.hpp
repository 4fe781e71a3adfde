// SPDX-License-Identifier: Apache-2.0
#ifndef HIERMOD_MONTECARLO_HPP
#define HIERMOD_MONTECARLO_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "hiermod/analytic.hpp"
#include "hiermod/receiver.hpp"

namespace hiermod {

/// Error counter for one measured quantity.
struct Counter {
    uint64_t bits = 0;
    uint64_t errors = 0;

    double ber() const { return bits ? static_cast<double>(errors) / static_cast<double>(bits) : 0.0; }
    /// 1.96 sqrt(p(1-p)/n), normal approximation to the binomial.
    double ci95_halfwidth() const;
    /// Points with fewer than 100 errors are reported but carry no
    /// acceptance weight.
    bool low_confidence() const { return errors < 100; }

    Counter& operator+=(const Counter& o) {
        bits += o.bits;
        errors += o.errors;
        return *this;
    }
};

/// Everything measured at one (lambda, CNR) operating point.
struct LinkStats {
    Counter legacy_raw_basic;     // sign slicer vs transmitted basic coded bits
    Counter legacy_coded_basic;   // legacy BCJR message decisions
    Counter secondary_raw;        // hard-demap secondary slots (lambda > 0)
    Counter basic_raw_given_s0;   // slicer errors split by the secondary bit
    Counter basic_raw_given_s1;   //   sharing the dimension
    std::vector<Counter> coded_basic;     // hierarchical receiver, per pass
    std::vector<Counter> coded_secondary; // per pass; empty when disabled

    LinkStats& operator+=(const LinkStats& o);
};

struct RunSpec {
    std::vector<analytic::OperatingPoint> operating_points;
    uint32_t frames = 100;
    uint32_t frame_message_bits = 4096; // basic message bits per frame
    uint64_t seed = 1;
    Mapping mapping = Mapping::KarnaughGray;
    IterationSchedule schedule;
    ConvCode basic_code = default_conv_code();
    ConvCode secondary_code = default_conv_code();
    uint32_t repetition = 0; // 0 = round((1-lambda)^2/lambda^2)
    BlockInterleaver interleaver;
    uint32_t workers = 1;
    uint32_t first_frame = 0; // frames [first_frame, first_frame + frames)
    bool zero_noise = false;  // channel adds nothing; receiver sigma unchanged

    void validate() const;
};

/// Runs the full transmitter -> AWGN -> both-receivers chain for every
/// operating point. Frame f of point p draws all randomness from substreams
/// keyed on (seed, p, first_frame + f), so results are bit-identical for any
/// worker count and half-runs merge into the full run.
std::vector<std::pair<analytic::OperatingPoint, LinkStats>> simulate(const RunSpec& spec);

/// Measured counterpart of the MNR formula: QPSK-layer power 2 d1^2 over the
/// mean squared deviation of received symbols from their transmitted
/// quadrant center (channel noise plus secondary scatter). Returns linear.
double empirical_mnr(double lambda, double cnr_db, uint64_t symbols, uint64_t seed,
                     Mapping mapping = Mapping::KarnaughGray);

} // namespace hiermod

#endif
