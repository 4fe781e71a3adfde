/* SPDX-License-Identifier: Apache-2.0
 *
 * C interface of the hiermod library: analytic formulas, constellation
 * primitives and the Monte Carlo link simulator for QPSK/16QAM hierarchical
 * modulation. All functions return HM_OK (0) on success or a nonzero error
 * code; hm_last_error() describes the most recent failure on the calling
 * thread. Handles are opaque and must be released with their destroy call.
 */
#ifndef HIERMOD_H
#define HIERMOD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

enum {
    HM_OK = 0,
    HM_ERR_INVALID_ARGUMENT = 1, /* bad parameter or handle state */
    HM_ERR_DOMAIN = 2,           /* input outside a formula's domain */
    HM_ERR_RUNTIME = 3           /* internal failure */
};

/* Message for the last error on this thread; empty string if none. */
const char* hm_last_error(void);

const char* hm_version(void);

/* ---- analytic formulas (closed form, no handle) -------------------- */

int hm_q_function(double x, double* out);
int hm_q_inverse(double p, double* out);

/* Modulation noise ratio, linear. */
int hm_mnr(double lambda, double cnr_db, double* out_linear);
/* Penalty in MNR, dB. */
int hm_penalty_mnr(double lambda, double cnr_db, double* out_db);
/* Penalty in raw BER, dB; HM_ERR_DOMAIN when the raw BER reaches 1/2. */
int hm_penalty_ber(double lambda, double cnr_db, double* out_db);

/* Raw bit error rates of the unaided QPSK receiver and of the secondary
 * hierarchy under minimum-distance demapping. */
int hm_ber_qpsk(double cnr_db, double* out);
int hm_ber_basic_raw(double lambda, double cnr_db, double* out);
int hm_ber_basic_conditional(double lambda, double cnr_db, int secondary_bit, double* out);
int hm_ber_secondary_raw(double lambda, double cnr_db, double* out);

/* bitrate_secondary / bitrate_basic = lambda^2 / (1 - lambda)^2. */
int hm_rate_ratio(double lambda, double* out);
/* log2(1 + snr), snr linear. */
int hm_awgn_capacity(double snr_linear, double* out);

/* ---- constellation primitives -------------------------------------- */

enum { HM_MAPPING_GRAY = 0, HM_MAPPING_BALANCED = 1 };

/* bits = {b_i, b_q, s_i, s_q}, each 0 or 1; out_iq = {I, Q}. */
int hm_map_hierarchical(double lambda, double d1, int mapping, const int bits[4],
                        double out_iq[2]);
int hm_map_qpsk(double d1, int b_i, int b_q, double out_iq[2]);
/* Minimum-distance slicer; fills out_bits = {b_i, b_q, s_i, s_q}. */
int hm_demap_hard(double lambda, double d1, int mapping, double i, double q,
                  int out_bits[4]);
/* Per-dimension noise standard deviation sqrt(N0/2) at the given point. */
int hm_noise_sigma(double lambda, double d1, double cnr_db, double* out_sigma);

/* ---- Monte Carlo link simulation ------------------------------------ */

typedef struct hm_sim hm_sim;

enum { HM_PRIOR_EXTRINSIC = 0, HM_PRIOR_FULL_APP = 1 };

/* Measured quantities; the *_ITER ids are indexed by decoding pass. */
enum {
    HM_STAT_LEGACY_RAW_BASIC = 0,
    HM_STAT_LEGACY_CODED_BASIC = 1,
    HM_STAT_SECONDARY_RAW = 2,
    HM_STAT_BASIC_RAW_GIVEN_S0 = 3,
    HM_STAT_BASIC_RAW_GIVEN_S1 = 4,
    HM_STAT_CODED_BASIC_ITER = 5,
    HM_STAT_CODED_SECONDARY_ITER = 6
};

typedef struct hm_stat {
    uint64_t bits;
    uint64_t errors;
    double ber;
    double ci95_halfwidth;
} hm_stat;

hm_sim* hm_sim_create(void);
void hm_sim_destroy(hm_sim* sim);

int hm_sim_set_seed(hm_sim* sim, uint64_t seed);
int hm_sim_set_frames(hm_sim* sim, uint32_t frames);
int hm_sim_set_message_bits(hm_sim* sim, uint32_t bits);
int hm_sim_set_mapping(hm_sim* sim, int mapping);
int hm_sim_set_iterations(hm_sim* sim, uint32_t passes);
int hm_sim_set_prior_mode(hm_sim* sim, int mode);
int hm_sim_set_workers(hm_sim* sim, uint32_t workers);
int hm_sim_set_zero_noise(hm_sim* sim, int enabled);
/* taps are octal-specified generator masks, e.g. {0171, 0133}. */
int hm_sim_set_basic_code(hm_sim* sim, uint32_t constraint_length,
                          const uint32_t* taps, size_t tap_count);
int hm_sim_set_secondary_code(hm_sim* sim, uint32_t constraint_length,
                              const uint32_t* taps, size_t tap_count);
/* 0 selects round((1-lambda)^2/lambda^2) per operating point. */
int hm_sim_set_repetition(hm_sim* sim, uint32_t repetition);
int hm_sim_set_interleaver(hm_sim* sim, uint32_t rows, uint32_t cols);
int hm_sim_add_point(hm_sim* sim, double lambda, double cnr_db);

/* Runs every configured point; blocks until done. */
int hm_sim_run(hm_sim* sim);

int hm_sim_point_count(const hm_sim* sim, size_t* out);
int hm_sim_point(const hm_sim* sim, size_t index, double* out_lambda, double* out_cnr_db);
int hm_sim_iterations(const hm_sim* sim, uint32_t* out);
/* iteration is ignored for non *_ITER stats. */
int hm_sim_stat(const hm_sim* sim, size_t point, int stat_id, uint32_t iteration,
                hm_stat* out);

#ifdef __cplusplus
}
#endif

#endif /* HIERMOD_H */
