// SPDX-License-Identifier: Apache-2.0
#include "hiermod/analytic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hiermod::analytic {

double OperatingPoint::cnr_linear() const { return std::pow(10.0, cnr_db / 10.0); }

void OperatingPoint::validate() const {
    if (!(lambda >= 0.0 && lambda <= 0.5))
        throw std::invalid_argument("OperatingPoint: lambda must be in [0, 1/2]");
    if (!std::isfinite(cnr_db))
        throw std::invalid_argument("OperatingPoint: cnr_db must be finite");
}

double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

namespace {

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Abramowitz & Stegun 26.2.23 rational approximation of the upper-tail
// normal quantile for p <= 1/2; absolute error below 4.5e-4 before polish.
double q_inverse_guess(double p) {
    const double t = std::sqrt(-2.0 * std::log(p));
    return t - (2.30753 + 0.27061 * t) / (1.0 + 0.99229 * t + 0.04481 * t * t);
}

} // namespace

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("q_inverse: p must lie strictly in (0, 1)");
    if (p == 0.5) return 0.0;
    const bool flip = p > 0.5;
    const double pt = flip ? 1.0 - p : p;
    double x = q_inverse_guess(pt);
    // Newton on Q(x) - p; three steps take the 4.5e-4 guess to machine
    // precision, the fourth is a safety margin near the extremes.
    for (int k = 0; k < 4; ++k) {
        const double step = (q_function(x) - pt) / normal_pdf(x);
        x += step;
        if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    return flip ? -x : x;
}

double mnr(const OperatingPoint& pt) {
    pt.validate();
    const double cnr = pt.cnr_linear();
    return cnr / (1.0 + pt.lambda * pt.lambda * (1.0 + cnr));
}

double penalty_mnr(const OperatingPoint& pt) {
    pt.validate();
    return 10.0 * std::log10(1.0 + pt.lambda * pt.lambda * (1.0 + pt.cnr_linear()));
}

double ber_basic_raw(const OperatingPoint& pt) {
    pt.validate();
    const double root_cnr = std::sqrt(pt.cnr_linear());
    const double s = std::sqrt(1.0 + pt.lambda * pt.lambda);
    return 0.5 * q_function((1.0 - pt.lambda) / s * root_cnr) +
           0.5 * q_function((1.0 + pt.lambda) / s * root_cnr);
}

double ber_qpsk(double cnr_linear) {
    if (!(cnr_linear > 0.0))
        throw std::invalid_argument("ber_qpsk: cnr must be positive");
    return q_function(std::sqrt(cnr_linear));
}

double penalty_ber(const OperatingPoint& pt) {
    const double ber = ber_basic_raw(pt);
    if (ber >= 0.5)
        throw std::domain_error("penalty_ber: raw BER reaches 1/2, penalty undefined");
    const double x = q_inverse(ber);
    return 10.0 * std::log10(pt.cnr_linear() / (x * x));
}

double ber_basic_conditional(const OperatingPoint& pt, int secondary_bit) {
    pt.validate();
    const double root_cnr = std::sqrt(pt.cnr_linear());
    const double s = std::sqrt(1.0 + pt.lambda * pt.lambda);
    const double a = secondary_bit ? (1.0 - pt.lambda) : (1.0 + pt.lambda);
    return q_function(a / s * root_cnr);
}

double ber_secondary_raw(const OperatingPoint& pt) {
    pt.validate();
    if (!(pt.lambda > 0.0))
        throw std::invalid_argument("ber_secondary_raw: lambda must be positive");
    const double root_cnr = std::sqrt(pt.cnr_linear());
    const double s = std::sqrt(1.0 + pt.lambda * pt.lambda);
    return q_function(pt.lambda / s * root_cnr) +
           0.5 * q_function((2.0 - pt.lambda) / s * root_cnr) -
           0.5 * q_function((2.0 + pt.lambda) / s * root_cnr);
}

double rate_ratio(double lambda) {
    if (!(lambda > 0.0 && lambda < 1.0))
        throw std::domain_error("rate_ratio: lambda must lie in (0, 1)");
    const double r = lambda / (1.0 - lambda);
    return r * r;
}

RateEstimate estimate_rate(double lambda, double basic_rate) {
    RateEstimate est;
    est.lambda = lambda;
    est.ratio = rate_ratio(lambda);
    est.basic_rate = basic_rate;
    est.secondary_rate = est.ratio * basic_rate;
    return est;
}

double awgn_capacity(double snr_linear) {
    if (!(snr_linear >= 0.0))
        throw std::invalid_argument("awgn_capacity: snr must be nonnegative");
    return std::log2(1.0 + snr_linear);
}

PenaltyCurve sample_penalty_curve(PenaltyKind kind, double lambda,
                                  double lo_db, double hi_db, double step_db) {
    if (!(step_db > 0.0) || !(hi_db >= lo_db))
        throw std::invalid_argument("sample_penalty_curve: bad CNR range");
    PenaltyCurve curve;
    curve.lambda = lambda;
    curve.kind = kind;
    const int count = static_cast<int>(std::floor((hi_db - lo_db) / step_db + 1e-9)) + 1;
    curve.samples.reserve(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double cnr_db = lo_db + k * step_db;
        OperatingPoint pt{lambda, cnr_db};
        const double pen = kind == PenaltyKind::Mnr ? penalty_mnr(pt) : penalty_ber(pt);
        curve.samples.emplace_back(cnr_db, pen);
    }
    return curve;
}

} // namespace hiermod::analytic
