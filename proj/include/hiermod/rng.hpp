// SPDX-License-Identifier: Apache-2.0
#ifndef HIERMOD_RNG_HPP
#define HIERMOD_RNG_HPP

#include <cstdint>
#include <utility>

namespace hiermod {

/// SplitMix64 (Steele, Lea, Flood, "Fast splittable pseudorandom number
/// generators", OOPSLA 2014). Counter-based: the state advances by a fixed
/// odd constant and the output is a bijective hash of the counter, so
/// substreams derived from (seed, index) are cheap and reproducible
/// regardless of scheduling.
class SplitMix64 {
  public:
    explicit SplitMix64(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in (0, 1]; never returns 0 so log() is safe.
    double next_unit() {
        return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    }

    /// Independent substream keyed by (this stream's seed, index).
    static uint64_t derive(uint64_t seed, uint64_t index) {
        SplitMix64 mix(seed ^ (0x7f4a7c15ULL + index * 0x9e3779b97f4a7c15ULL));
        mix.next();
        return mix.next();
    }

  private:
    uint64_t state_;
};

/// Seeded stream of standard Gaussian deviates (Box-Muller on SplitMix64
/// uniforms). Pairs come from one transform, matching the one-pair-per-symbol
/// consumption of the AWGN channel.
class GaussianSource {
  public:
    explicit GaussianSource(uint64_t seed) : rng_(seed) {}

    static GaussianSource substream(uint64_t seed, uint64_t index) {
        return GaussianSource(SplitMix64::derive(seed, index));
    }

    /// One independent N(0,1) pair.
    std::pair<double, double> next_pair();

    double next();

  private:
    SplitMix64 rng_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

/// Seeded stream of equiprobable bits.
class BitSource {
  public:
    explicit BitSource(uint64_t seed) : rng_(seed) {}

    static BitSource substream(uint64_t seed, uint64_t index) {
        return BitSource(SplitMix64::derive(seed, index));
    }

    int next_bit() {
        if (remaining_ == 0) {
            word_ = rng_.next();
            remaining_ = 64;
        }
        int bit = static_cast<int>(word_ & 1u);
        word_ >>= 1;
        --remaining_;
        return bit;
    }

  private:
    SplitMix64 rng_;
    uint64_t word_ = 0;
    int remaining_ = 0;
};

} // namespace hiermod

#endif
