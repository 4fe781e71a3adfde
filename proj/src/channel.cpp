// SPDX-License-Identifier: Apache-2.0
#include "hiermod/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hiermod {

std::pair<double, double> GaussianSource::next_pair() {
    // Box-Muller; next_unit() is in (0,1] so the log is finite.
    const double u1 = rng_.next_unit();
    const double u2 = rng_.next_unit();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
}

double GaussianSource::next() {
    if (have_cached_) {
        have_cached_ = false;
        return cached_;
    }
    auto [a, b] = next_pair();
    cached_ = b;
    have_cached_ = true;
    return a;
}

ChannelSpec::ChannelSpec(double cnr_db_, const HierarchyConfig& cfg, uint64_t seed_)
    : cnr_db(cnr_db_), seed(seed_) {
    cfg.validate();
    noise_power_n0 = cfg.carrier_power() / std::pow(10.0, cnr_db_ / 10.0);
    validate();
}

void ChannelSpec::validate() const {
    if (!std::isfinite(cnr_db))
        throw std::invalid_argument("ChannelSpec: cnr_db must be finite");
    if (!(noise_power_n0 > 0.0))
        throw std::invalid_argument("ChannelSpec: noise power must be positive");
}

double noise_sigma(const ChannelSpec& spec) {
    return std::sqrt(spec.noise_power_n0 / 2.0);
}

double noise_sigma(double lambda, double d1, double cnr_db) {
    HierarchyConfig cfg{lambda, d1};
    return noise_sigma(ChannelSpec(cnr_db, cfg));
}

IqSymbol add_noise(const IqSymbol& x, double sigma, GaussianSource& rng) {
    auto [ni, nq] = rng.next_pair();
    return {x.i + sigma * ni, x.q + sigma * nq};
}

IqSymbol transmit(const IqSymbol& x, const ChannelSpec& spec, GaussianSource& rng) {
    return add_noise(x, noise_sigma(spec), rng);
}

} // namespace hiermod
