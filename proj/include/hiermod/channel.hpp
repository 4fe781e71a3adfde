// SPDX-License-Identifier: Apache-2.0
#ifndef HIERMOD_CHANNEL_HPP
#define HIERMOD_CHANNEL_HPP

#include <cstdint>

#include "hiermod/constellation.hpp"
#include "hiermod/rng.hpp"

namespace hiermod {

/// AWGN channel calibrated so that CNR = E_s/N0 holds exactly in linear
/// units for the configured constellation.
struct ChannelSpec {
    double cnr_db = 0.0;
    double noise_power_n0 = 0.0; // derived: carrier_power / 10^(cnr_db/10)
    uint64_t seed = 0;

    ChannelSpec() = default;
    ChannelSpec(double cnr_db_, const HierarchyConfig& cfg, uint64_t seed_ = 0);

    void validate() const;
};

/// Per-dimension noise standard deviation sqrt(N0/2); the complex noise
/// power N0 splits evenly between I and Q.
double noise_sigma(const ChannelSpec& spec);

/// Per-dimension sigma for a (lambda, cnr_db) operating point at d1.
double noise_sigma(double lambda, double d1, double cnr_db);

/// x plus circular Gaussian noise of total power N0.
IqSymbol transmit(const IqSymbol& x, const ChannelSpec& spec, GaussianSource& rng);

IqSymbol add_noise(const IqSymbol& x, double sigma, GaussianSource& rng);

} // namespace hiermod

#endif
