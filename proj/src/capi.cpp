// SPDX-License-Identifier: Apache-2.0
#include "hiermod.h"

#include <cstring>
#include <exception>
#include <string>

#include "hiermod/analytic.hpp"
#include "hiermod/channel.hpp"
#include "hiermod/constellation.hpp"
#include "hiermod/montecarlo.hpp"

namespace {

thread_local std::string g_last_error;

int fail(int code, const char* message) {
    g_last_error = message;
    return code;
}

// Maps C++ exceptions onto the C error codes.
template <typename Fn>
int guarded(Fn&& fn) {
    try {
        g_last_error.clear();
        fn();
        return HM_OK;
    } catch (const std::domain_error& e) {
        return fail(HM_ERR_DOMAIN, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(HM_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::exception& e) {
        return fail(HM_ERR_RUNTIME, e.what());
    } catch (...) {
        return fail(HM_ERR_RUNTIME, "unknown failure");
    }
}

hiermod::Mapping to_mapping(int mapping) {
    switch (mapping) {
    case HM_MAPPING_GRAY:
        return hiermod::Mapping::KarnaughGray;
    case HM_MAPPING_BALANCED:
        return hiermod::Mapping::Balanced;
    default:
        throw std::invalid_argument("unknown mapping id");
    }
}

void require(bool ok, const char* message) {
    if (!ok) throw std::invalid_argument(message);
}

} // namespace

struct hm_sim {
    hiermod::RunSpec spec;
    std::vector<std::pair<hiermod::analytic::OperatingPoint, hiermod::LinkStats>> results;
    bool ran = false;
};

namespace {

template <typename Fn>
int with_sim(hm_sim* sim, Fn&& fn) {
    return guarded([&] {
        require(sim != nullptr, "null simulation handle");
        fn(*sim);
    });
}

void set_code(hiermod::ConvCode& code, uint32_t constraint_length, const uint32_t* taps,
              size_t tap_count) {
    require(taps != nullptr && tap_count >= 2, "at least two generator taps required");
    code.constraint_length = static_cast<int>(constraint_length);
    code.generators.assign(taps, taps + tap_count);
    code.validate();
}

} // namespace

extern "C" {

const char* hm_last_error(void) { return g_last_error.c_str(); }

const char* hm_version(void) { return "1.0.0"; }

int hm_q_function(double x, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = hiermod::analytic::q_function(x);
    });
}

int hm_q_inverse(double p, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = hiermod::analytic::q_inverse(p);
    });
}

int hm_mnr(double lambda, double cnr_db, double* out_linear) {
    return guarded([&] {
        require(out_linear != nullptr, "null output pointer");
        *out_linear = hiermod::analytic::mnr({lambda, cnr_db});
    });
}

int hm_penalty_mnr(double lambda, double cnr_db, double* out_db) {
    return guarded([&] {
        require(out_db != nullptr, "null output pointer");
        *out_db = hiermod::analytic::penalty_mnr({lambda, cnr_db});
    });
}

int hm_penalty_ber(double lambda, double cnr_db, double* out_db) {
    return guarded([&] {
        require(out_db != nullptr, "null output pointer");
        *out_db = hiermod::analytic::penalty_ber({lambda, cnr_db});
    });
}

int hm_ber_qpsk(double cnr_db, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = hiermod::analytic::ber_qpsk(hiermod::analytic::OperatingPoint{0.0, cnr_db}.cnr_linear());
    });
}

int hm_ber_basic_raw(double lambda, double cnr_db, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = hiermod::analytic::ber_basic_raw({lambda, cnr_db});
    });
}

int hm_ber_basic_conditional(double lambda, double cnr_db, int secondary_bit, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        require(secondary_bit == 0 || secondary_bit == 1, "secondary bit must be 0 or 1");
        *out = hiermod::analytic::ber_basic_conditional({lambda, cnr_db}, secondary_bit);
    });
}

int hm_ber_secondary_raw(double lambda, double cnr_db, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = hiermod::analytic::ber_secondary_raw({lambda, cnr_db});
    });
}

int hm_rate_ratio(double lambda, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = hiermod::analytic::rate_ratio(lambda);
    });
}

int hm_awgn_capacity(double snr_linear, double* out) {
    return guarded([&] {
        require(out != nullptr, "null output pointer");
        *out = hiermod::analytic::awgn_capacity(snr_linear);
    });
}

int hm_map_hierarchical(double lambda, double d1, int mapping, const int bits[4],
                        double out_iq[2]) {
    return guarded([&] {
        require(bits != nullptr && out_iq != nullptr, "null pointer");
        for (int k = 0; k < 4; ++k) require(bits[k] == 0 || bits[k] == 1, "bits must be 0 or 1");
        const hiermod::HierarchyConfig cfg{lambda, d1, to_mapping(mapping)};
        const hiermod::IqSymbol sym = hiermod::map_hierarchical(
            {static_cast<uint8_t>(bits[0]), static_cast<uint8_t>(bits[1]),
             static_cast<uint8_t>(bits[2]), static_cast<uint8_t>(bits[3])},
            cfg);
        out_iq[0] = sym.i;
        out_iq[1] = sym.q;
    });
}

int hm_map_qpsk(double d1, int b_i, int b_q, double out_iq[2]) {
    return guarded([&] {
        require(out_iq != nullptr, "null pointer");
        require((b_i == 0 || b_i == 1) && (b_q == 0 || b_q == 1), "bits must be 0 or 1");
        const hiermod::HierarchyConfig cfg{0.0, d1};
        const hiermod::IqSymbol sym = hiermod::map_qpsk(b_i, b_q, cfg);
        out_iq[0] = sym.i;
        out_iq[1] = sym.q;
    });
}

int hm_demap_hard(double lambda, double d1, int mapping, double i, double q, int out_bits[4]) {
    return guarded([&] {
        require(out_bits != nullptr, "null pointer");
        const hiermod::HierarchyConfig cfg{lambda, d1, to_mapping(mapping)};
        const hiermod::BitQuad quad = hiermod::demap_hard({i, q}, cfg);
        out_bits[0] = quad.b_i;
        out_bits[1] = quad.b_q;
        out_bits[2] = quad.s_i;
        out_bits[3] = quad.s_q;
    });
}

int hm_noise_sigma(double lambda, double d1, double cnr_db, double* out_sigma) {
    return guarded([&] {
        require(out_sigma != nullptr, "null output pointer");
        *out_sigma = hiermod::noise_sigma(lambda, d1, cnr_db);
    });
}

hm_sim* hm_sim_create(void) {
    try {
        auto* sim = new hm_sim;
        sim->spec.operating_points.clear();
        return sim;
    } catch (...) {
        return nullptr;
    }
}

void hm_sim_destroy(hm_sim* sim) { delete sim; }

int hm_sim_set_seed(hm_sim* sim, uint64_t seed) {
    return with_sim(sim, [&](hm_sim& s) { s.spec.seed = seed; });
}

int hm_sim_set_frames(hm_sim* sim, uint32_t frames) {
    return with_sim(sim, [&](hm_sim& s) {
        require(frames >= 1, "at least one frame required");
        s.spec.frames = frames;
    });
}

int hm_sim_set_message_bits(hm_sim* sim, uint32_t bits) {
    return with_sim(sim, [&](hm_sim& s) {
        require(bits >= 8, "at least 8 message bits required");
        s.spec.frame_message_bits = bits;
    });
}

int hm_sim_set_mapping(hm_sim* sim, int mapping) {
    return with_sim(sim, [&](hm_sim& s) { s.spec.mapping = to_mapping(mapping); });
}

int hm_sim_set_iterations(hm_sim* sim, uint32_t passes) {
    return with_sim(sim, [&](hm_sim& s) {
        require(passes >= 1, "at least one decoding pass required");
        s.spec.schedule.max_iterations = static_cast<int>(passes);
    });
}

int hm_sim_set_prior_mode(hm_sim* sim, int mode) {
    return with_sim(sim, [&](hm_sim& s) {
        switch (mode) {
        case HM_PRIOR_EXTRINSIC:
            s.spec.schedule.prior_mode = hiermod::PriorMode::Extrinsic;
            break;
        case HM_PRIOR_FULL_APP:
            s.spec.schedule.prior_mode = hiermod::PriorMode::FullApp;
            break;
        default:
            throw std::invalid_argument("unknown prior mode");
        }
    });
}

int hm_sim_set_workers(hm_sim* sim, uint32_t workers) {
    return with_sim(sim, [&](hm_sim& s) {
        require(workers >= 1, "at least one worker required");
        s.spec.workers = workers;
    });
}

int hm_sim_set_zero_noise(hm_sim* sim, int enabled) {
    return with_sim(sim, [&](hm_sim& s) { s.spec.zero_noise = enabled != 0; });
}

int hm_sim_set_basic_code(hm_sim* sim, uint32_t constraint_length, const uint32_t* taps,
                          size_t tap_count) {
    return with_sim(sim,
                    [&](hm_sim& s) { set_code(s.spec.basic_code, constraint_length, taps, tap_count); });
}

int hm_sim_set_secondary_code(hm_sim* sim, uint32_t constraint_length, const uint32_t* taps,
                              size_t tap_count) {
    return with_sim(sim, [&](hm_sim& s) {
        set_code(s.spec.secondary_code, constraint_length, taps, tap_count);
    });
}

int hm_sim_set_repetition(hm_sim* sim, uint32_t repetition) {
    return with_sim(sim, [&](hm_sim& s) { s.spec.repetition = repetition; });
}

int hm_sim_set_interleaver(hm_sim* sim, uint32_t rows, uint32_t cols) {
    return with_sim(sim, [&](hm_sim& s) {
        require(rows >= 1 && cols >= 1, "interleaver dimensions must be positive");
        s.spec.interleaver = hiermod::BlockInterleaver{rows, cols};
    });
}

int hm_sim_add_point(hm_sim* sim, double lambda, double cnr_db) {
    return with_sim(sim, [&](hm_sim& s) {
        hiermod::analytic::OperatingPoint pt{lambda, cnr_db};
        pt.validate();
        s.spec.operating_points.push_back(pt);
    });
}

int hm_sim_run(hm_sim* sim) {
    return with_sim(sim, [&](hm_sim& s) {
        s.results = hiermod::simulate(s.spec);
        s.ran = true;
    });
}

int hm_sim_point_count(const hm_sim* sim, size_t* out) {
    return guarded([&] {
        require(sim != nullptr && out != nullptr, "null pointer");
        *out = sim->spec.operating_points.size();
    });
}

int hm_sim_point(const hm_sim* sim, size_t index, double* out_lambda, double* out_cnr_db) {
    return guarded([&] {
        require(sim != nullptr && out_lambda != nullptr && out_cnr_db != nullptr, "null pointer");
        require(index < sim->spec.operating_points.size(), "point index out of range");
        *out_lambda = sim->spec.operating_points[index].lambda;
        *out_cnr_db = sim->spec.operating_points[index].cnr_db;
    });
}

int hm_sim_iterations(const hm_sim* sim, uint32_t* out) {
    return guarded([&] {
        require(sim != nullptr && out != nullptr, "null pointer");
        *out = static_cast<uint32_t>(sim->spec.schedule.max_iterations);
    });
}

int hm_sim_stat(const hm_sim* sim, size_t point, int stat_id, uint32_t iteration, hm_stat* out) {
    return guarded([&] {
        require(sim != nullptr && out != nullptr, "null pointer");
        require(sim->ran, "simulation has not run");
        require(point < sim->results.size(), "point index out of range");
        const hiermod::LinkStats& stats = sim->results[point].second;
        const hiermod::Counter* counter = nullptr;
        switch (stat_id) {
        case HM_STAT_LEGACY_RAW_BASIC:
            counter = &stats.legacy_raw_basic;
            break;
        case HM_STAT_LEGACY_CODED_BASIC:
            counter = &stats.legacy_coded_basic;
            break;
        case HM_STAT_SECONDARY_RAW:
            counter = &stats.secondary_raw;
            break;
        case HM_STAT_BASIC_RAW_GIVEN_S0:
            counter = &stats.basic_raw_given_s0;
            break;
        case HM_STAT_BASIC_RAW_GIVEN_S1:
            counter = &stats.basic_raw_given_s1;
            break;
        case HM_STAT_CODED_BASIC_ITER:
            require(iteration < stats.coded_basic.size(), "iteration index out of range");
            counter = &stats.coded_basic[iteration];
            break;
        case HM_STAT_CODED_SECONDARY_ITER:
            require(iteration < stats.coded_secondary.size(), "iteration index out of range");
            counter = &stats.coded_secondary[iteration];
            break;
        default:
            throw std::invalid_argument("unknown stat id");
        }
        out->bits = counter->bits;
        out->errors = counter->errors;
        out->ber = counter->ber();
        out->ci95_halfwidth = counter->ci95_halfwidth();
    });
}

} // extern "C"
