// SPDX-License-Identifier: Apache-2.0
#ifndef HIERMOD_ANALYTIC_HPP
#define HIERMOD_ANALYTIC_HPP

#include <vector>

namespace hiermod::analytic {

/// One (lambda, CNR) point on the hierarchy/noise plane.
struct OperatingPoint {
    double lambda = 0.0;
    double cnr_db = 0.0;

    double cnr_linear() const;
    void validate() const;
};

enum class PenaltyKind { Mnr, Ber };

/// Sampled (cnr_db -> penalty_db) curve for one lambda.
struct PenaltyCurve {
    double lambda = 0.0;
    PenaltyKind kind = PenaltyKind::Mnr;
    std::vector<std::pair<double, double>> samples; // (cnr_db, penalty_db), cnr ascending
};

/// Secondary-vs-basic bit rate tradeoff for one lambda.
struct RateEstimate {
    double lambda = 0.0;
    double ratio = 0.0;          // bitrate_s / bitrate_b = lambda^2/(1-lambda)^2
    double basic_rate = 0.0;     // optional user input, 0 when absent
    double secondary_rate = 0.0; // ratio * basic_rate
};

/// Gaussian tail probability Q(x) = erfc(x/sqrt(2))/2.
double q_function(double x);

/// Inverse of q_function on (0,1), accurate to ~1e-15 relative: rational
/// initial guess (Giles-style in sqrt(-log) variable) plus Newton polish.
/// Throws std::domain_error outside (0,1).
double q_inverse(double p);

/// Modulation noise ratio CNR / (1 + lambda^2 (1 + CNR)), linear: the
/// effective CNR the deployed QPSK receivers see once the secondary scatter
/// is counted as noise.
double mnr(const OperatingPoint& pt);

/// 10 log10(1 + lambda^2 (1 + CNR)) = 10 log10(CNR/MNR), in dB.
double penalty_mnr(const OperatingPoint& pt);

/// Raw (uncoded) basic-bit error probability of a QPSK receiver in the
/// hierarchical system:
///   1/2 Q((1-l)/sqrt(1+l^2) sqrt(CNR)) + 1/2 Q((1+l)/sqrt(1+l^2) sqrt(CNR)).
double ber_basic_raw(const OperatingPoint& pt);

/// Raw bit error probability of plain QPSK, Q(sqrt(CNR)); cnr is linear.
double ber_qpsk(double cnr_linear);

/// Extra carrier power (dB) the hierarchical system needs for the QPSK
/// receivers to recover their original raw BER; closed form via q_inverse.
/// Throws std::domain_error when ber_basic_raw >= 1/2.
double penalty_ber(const OperatingPoint& pt);

/// Raw basic-bit error probability conditioned on the secondary bit sharing
/// the dimension (KarnaughGray labeling: secondary 1 selects the inner point).
double ber_basic_conditional(const OperatingPoint& pt, int secondary_bit);

/// Raw secondary-bit error probability of a minimum-distance receiver:
///   Q(l/s sqrt(CNR)) + 1/2 Q((2-l)/s sqrt(CNR)) - 1/2 Q((2+l)/s sqrt(CNR)),
/// s = sqrt(1+l^2). Requires lambda > 0.
double ber_secondary_raw(const OperatingPoint& pt);

/// bitrate_s / bitrate_b = lambda^2 / (1-lambda)^2 for equal-reliability
/// reception of both layers. Requires 0 < lambda < 1.
double rate_ratio(double lambda);

RateEstimate estimate_rate(double lambda, double basic_rate = 0.0);

/// Shannon capacity log2(1 + snr) in bits per symbol; snr is linear.
double awgn_capacity(double snr_linear);

/// Samples penalty_mnr or penalty_ber over [lo_db, hi_db] in step_db steps.
PenaltyCurve sample_penalty_curve(PenaltyKind kind, double lambda,
                                  double lo_db, double hi_db, double step_db);

} // namespace hiermod::analytic

#endif
