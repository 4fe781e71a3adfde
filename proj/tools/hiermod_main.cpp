// SPDX-License-Identifier: Apache-2.0
//
// Command line front end over the hiermod C API: penalty and BER curve
// generation, rate tables, and config-driven Monte Carlo runs. Emits
// gnuplot-friendly CSV; plotting is left to external tools.
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hiermod.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void die(int code, const std::string& message) { throw CliError{code, message}; }

void check(int rc) {
    if (rc != HM_OK) die(kExitRuntime, std::string(hm_last_error()));
}

// ---- formatting ------------------------------------------------------

std::string fmt_g6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// CNR values always carry a decimal point so columns read as dB.
std::string fmt_cnr(double v) {
    std::string s = fmt_g6(v);
    if (s.find_first_of(".e") == std::string::npos) s += ".0";
    return s;
}

std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// ---- option parsing --------------------------------------------------

struct CnrRange {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.0;

    std::vector<double> values() const {
        std::vector<double> out;
        const int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
        out.reserve(static_cast<size_t>(count));
        for (int k = 0; k < count; ++k) out.push_back(lo + k * step);
        return out;
    }
};

CnrRange parse_cnr_range(const std::string& text) {
    CnrRange range;
    char trailing = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &range.lo, &range.hi, &range.step, &trailing) != 3)
        die(kExitUsage, "invalid --cnr range '" + text + "', expected lo:hi:step");
    if (!(range.step > 0.0))
        die(kExitUsage, "invalid --cnr range: step must be positive");
    if (range.hi < range.lo)
        die(kExitUsage, "invalid --cnr range: hi must not be below lo");
    return range;
}

class Output {
  public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) die(kExitRuntime, "cannot open output file '" + path + "'");
        }
    }

    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    bool to_file() const { return file_.is_open(); }

  private:
    std::ofstream file_;
};

// ---- penalty / ber / rate --------------------------------------------

int run_penalty(const std::string& kind, const std::vector<double>& lambdas,
                const CnrRange& range, const std::string& out_path) {
    Output out(out_path);
    out.stream() << "cnr_db,lambda,penalty_db\n";
    const bool mnr = kind == "mnr";
    for (double lambda : lambdas) {
        for (double cnr_db : range.values()) {
            double pen = 0.0;
            check(mnr ? hm_penalty_mnr(lambda, cnr_db, &pen)
                      : hm_penalty_ber(lambda, cnr_db, &pen));
            out.stream() << fmt_cnr(cnr_db) << ',' << fmt_g6(lambda) << ','
                         << fmt_fixed(pen, 3) << '\n';
        }
    }
    return kExitOk;
}

int run_ber(const std::vector<double>& lambdas, const CnrRange& range,
            const std::string& out_path) {
    Output out(out_path);
    out.stream() << "cnr_db,lambda,ber_qpsk,ber_basic,ber_secondary,"
                    "ber_basic_given_s1,ber_basic_given_s0\n";
    for (double lambda : lambdas) {
        for (double cnr_db : range.values()) {
            double qpsk = 0.0;
            double basic = 0.0;
            double c1 = 0.0;
            double c0 = 0.0;
            check(hm_ber_qpsk(cnr_db, &qpsk));
            check(hm_ber_basic_raw(lambda, cnr_db, &basic));
            check(hm_ber_basic_conditional(lambda, cnr_db, 1, &c1));
            check(hm_ber_basic_conditional(lambda, cnr_db, 0, &c0));
            double secondary = std::numeric_limits<double>::quiet_NaN();
            if (lambda > 0.0) check(hm_ber_secondary_raw(lambda, cnr_db, &secondary));
            out.stream() << fmt_cnr(cnr_db) << ',' << fmt_g6(lambda) << ',' << fmt_g6(qpsk)
                         << ',' << fmt_g6(basic) << ',' << fmt_g6(secondary) << ','
                         << fmt_g6(c1) << ',' << fmt_g6(c0) << '\n';
        }
    }
    return kExitOk;
}

int run_rate(const std::vector<double>& lambdas, std::optional<double> basic_rate,
             const std::string& out_path) {
    Output out(out_path);
    char line[128];
    std::snprintf(line, sizeof line, "%-8s  %-10s  %-8s", "lambda", "ratio", "percent");
    out.stream() << line;
    if (basic_rate) out.stream() << "  secondary_rate";
    out.stream() << '\n';
    for (double lambda : lambdas) {
        double ratio = 0.0;
        check(hm_rate_ratio(lambda, &ratio));
        std::snprintf(line, sizeof line, "%-8s  %-10s  %-8s", fmt_g6(lambda).c_str(),
                      fmt_g6(ratio).c_str(), (fmt_fixed(100.0 * ratio, 2) + "%").c_str());
        out.stream() << line;
        if (basic_rate) out.stream() << "  " << fmt_fixed(*basic_rate * ratio, 3);
        out.stream() << '\n';
    }
    return kExitOk;
}

// ---- simulate ---------------------------------------------------------

struct SimConfig {
    std::vector<double> lambdas;
    std::vector<double> cnrs;
    uint32_t frames = 100;
    uint32_t message_bits = 4096;
    uint64_t seed = 1;
    std::string mapping = "gray";
    uint32_t iterations = 1;
    std::string prior_mode = "extrinsic";
    uint32_t workers = 1;
    std::string repetition = "auto";
    std::vector<uint32_t> basic_code = {0171, 0133};
    std::vector<uint32_t> secondary_code = {0171, 0133};
    uint32_t interleaver_rows = 1;
    uint32_t interleaver_cols = 1;
    bool zero_noise = false;
    std::string out;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> items;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

[[noreturn]] void config_error(const std::string& path, int line, const std::string& what) {
    die(kExitUsage, path + ":" + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& path, int line, const std::string& v) {
    try {
        size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        config_error(path, line, "invalid number '" + v + "'");
    }
}

uint64_t parse_u64(const std::string& path, int line, const std::string& v) {
    try {
        size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        config_error(path, line, "invalid integer '" + v + "'");
    }
}

uint32_t parse_octal(const std::string& path, int line, const std::string& v) {
    try {
        size_t used = 0;
        const unsigned long x = std::stoul(v, &used, 8);
        if (used != v.size()) throw std::invalid_argument(v);
        return static_cast<uint32_t>(x);
    } catch (const std::exception&) {
        config_error(path, line, "invalid octal tap '" + v + "'");
    }
}

bool parse_bool(const std::string& path, int line, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    config_error(path, line, "invalid boolean '" + v + "'");
}

// Flat key = value format; '#' starts a comment, unknown keys are an error.
SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) die(kExitUsage, "cannot read config file '" + path + "'");
    SimConfig cfg;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) config_error(path, line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty()) config_error(path, line_no, "empty value for key '" + key + "'");

        if (key == "lambda") {
            cfg.lambdas.clear();
            for (const auto& item : split_list(value))
                cfg.lambdas.push_back(parse_double(path, line_no, item));
        } else if (key == "cnr_db") {
            cfg.cnrs.clear();
            for (const auto& item : split_list(value))
                cfg.cnrs.push_back(parse_double(path, line_no, item));
        } else if (key == "frames") {
            cfg.frames = static_cast<uint32_t>(parse_u64(path, line_no, value));
        } else if (key == "message_bits") {
            cfg.message_bits = static_cast<uint32_t>(parse_u64(path, line_no, value));
        } else if (key == "seed") {
            cfg.seed = parse_u64(path, line_no, value);
        } else if (key == "mapping") {
            if (value != "gray" && value != "balanced")
                config_error(path, line_no, "mapping must be 'gray' or 'balanced'");
            cfg.mapping = value;
        } else if (key == "iterations") {
            cfg.iterations = static_cast<uint32_t>(parse_u64(path, line_no, value));
        } else if (key == "prior_mode") {
            if (value != "extrinsic" && value != "paper")
                config_error(path, line_no, "prior_mode must be 'extrinsic' or 'paper'");
            cfg.prior_mode = value;
        } else if (key == "workers") {
            cfg.workers = static_cast<uint32_t>(parse_u64(path, line_no, value));
        } else if (key == "repetition") {
            if (value != "auto") parse_u64(path, line_no, value);
            cfg.repetition = value;
        } else if (key == "basic_code" || key == "secondary_code") {
            std::vector<uint32_t> taps;
            for (const auto& item : split_list(value))
                taps.push_back(parse_octal(path, line_no, item));
            if (taps.size() < 2) config_error(path, line_no, "need at least two generator taps");
            (key == "basic_code" ? cfg.basic_code : cfg.secondary_code) = taps;
        } else if (key == "interleaver_rows") {
            cfg.interleaver_rows = static_cast<uint32_t>(parse_u64(path, line_no, value));
        } else if (key == "interleaver_cols") {
            cfg.interleaver_cols = static_cast<uint32_t>(parse_u64(path, line_no, value));
        } else if (key == "zero_noise") {
            cfg.zero_noise = parse_bool(path, line_no, value);
        } else if (key == "out") {
            cfg.out = value;
        } else {
            config_error(path, line_no, "unknown key '" + key + "'");
        }
    }
    return cfg;
}

uint32_t constraint_length_of(const std::vector<uint32_t>& taps) {
    uint32_t widest = 0;
    for (uint32_t t : taps) {
        uint32_t bits = 0;
        while (t >> bits) ++bits;
        widest = std::max(widest, bits);
    }
    return widest;
}

std::string join_octal(const std::vector<uint32_t>& taps) {
    std::string s;
    for (size_t k = 0; k < taps.size(); ++k) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%o", taps[k]);
        if (k) s += ',';
        s += buf;
    }
    return s;
}

class SimHandle {
  public:
    SimHandle() : sim_(hm_sim_create()) {
        if (!sim_) die(kExitRuntime, "failed to allocate simulation handle");
    }
    ~SimHandle() { hm_sim_destroy(sim_); }
    SimHandle(const SimHandle&) = delete;
    SimHandle& operator=(const SimHandle&) = delete;
    hm_sim* get() { return sim_; }

  private:
    hm_sim* sim_;
};

int run_simulate(const SimConfig& cfg) {
    if (cfg.lambdas.empty() || cfg.cnrs.empty()) die(kExitUsage, "no operating points");

    SimHandle sim;
    check(hm_sim_set_seed(sim.get(), cfg.seed));
    check(hm_sim_set_frames(sim.get(), cfg.frames));
    check(hm_sim_set_message_bits(sim.get(), cfg.message_bits));
    check(hm_sim_set_mapping(sim.get(),
                             cfg.mapping == "balanced" ? HM_MAPPING_BALANCED : HM_MAPPING_GRAY));
    check(hm_sim_set_iterations(sim.get(), cfg.iterations));
    check(hm_sim_set_prior_mode(sim.get(), cfg.prior_mode == "paper" ? HM_PRIOR_FULL_APP
                                                                     : HM_PRIOR_EXTRINSIC));
    check(hm_sim_set_workers(sim.get(), cfg.workers));
    check(hm_sim_set_zero_noise(sim.get(), cfg.zero_noise ? 1 : 0));
    check(hm_sim_set_basic_code(sim.get(), constraint_length_of(cfg.basic_code),
                                cfg.basic_code.data(), cfg.basic_code.size()));
    check(hm_sim_set_secondary_code(sim.get(), constraint_length_of(cfg.secondary_code),
                                    cfg.secondary_code.data(), cfg.secondary_code.size()));
    check(hm_sim_set_repetition(
        sim.get(), cfg.repetition == "auto"
                       ? 0
                       : static_cast<uint32_t>(std::stoul(cfg.repetition))));
    check(hm_sim_set_interleaver(sim.get(), cfg.interleaver_rows, cfg.interleaver_cols));
    for (double lambda : cfg.lambdas)
        for (double cnr : cfg.cnrs)
            check(hm_sim_add_point(sim.get(), lambda, cnr));

    const auto start = std::chrono::steady_clock::now();
    check(hm_sim_run(sim.get()));
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    Output out(cfg.out);
    // The run log is self-describing: every effective setting is echoed,
    // defaults included. It goes to stderr when the CSV owns stdout.
    std::ostream& log = out.to_file() ? std::cout : std::cerr;
    log << "# hiermod simulate run log\n";
    auto log_kv = [&](const char* key, const std::string& value) {
        log << key << " = " << value << '\n';
    };
    {
        std::string ls;
        for (size_t k = 0; k < cfg.lambdas.size(); ++k)
            ls += (k ? ", " : "") + fmt_g6(cfg.lambdas[k]);
        log_kv("lambda", ls);
        std::string cs;
        for (size_t k = 0; k < cfg.cnrs.size(); ++k) cs += (k ? ", " : "") + fmt_cnr(cfg.cnrs[k]);
        log_kv("cnr_db", cs);
    }
    log_kv("frames", std::to_string(cfg.frames));
    log_kv("message_bits", std::to_string(cfg.message_bits));
    log_kv("seed", std::to_string(cfg.seed));
    log_kv("mapping", cfg.mapping);
    log_kv("iterations", std::to_string(cfg.iterations));
    log_kv("prior_mode", cfg.prior_mode);
    log_kv("workers", std::to_string(cfg.workers));
    log_kv("repetition", cfg.repetition);
    log_kv("basic_code", join_octal(cfg.basic_code));
    log_kv("secondary_code", join_octal(cfg.secondary_code));
    log_kv("interleaver", std::to_string(cfg.interleaver_rows) + "x" +
                              std::to_string(cfg.interleaver_cols));
    log_kv("zero_noise", cfg.zero_noise ? "true" : "false");
    log_kv("out", cfg.out.empty() ? "(stdout)" : cfg.out);
    log_kv("wall_clock_seconds", fmt_fixed(elapsed, 3));

    out.stream() << "cnr_db,lambda,iteration,ber_basic_raw,ber_basic_coded,ber_secondary_raw,"
                    "ber_secondary_coded,bits,errors_basic_raw,ci_halfwidth_basic_raw\n";
    size_t points = 0;
    check(hm_sim_point_count(sim.get(), &points));
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (size_t p = 0; p < points; ++p) {
        double lambda = 0.0;
        double cnr_db = 0.0;
        check(hm_sim_point(sim.get(), p, &lambda, &cnr_db));
        hm_stat raw{};
        hm_stat sec_raw{};
        check(hm_sim_stat(sim.get(), p, HM_STAT_LEGACY_RAW_BASIC, 0, &raw));
        check(hm_sim_stat(sim.get(), p, HM_STAT_SECONDARY_RAW, 0, &sec_raw));
        for (uint32_t k = 0; k < cfg.iterations; ++k) {
            hm_stat coded_b{};
            hm_stat coded_s{};
            check(hm_sim_stat(sim.get(), p, HM_STAT_CODED_BASIC_ITER, k, &coded_b));
            check(hm_sim_stat(sim.get(), p, HM_STAT_CODED_SECONDARY_ITER, k, &coded_s));
            out.stream() << fmt_cnr(cnr_db) << ',' << fmt_g6(lambda) << ',' << k << ','
                         << fmt_g6(raw.ber) << ',' << fmt_g6(coded_b.ber) << ','
                         << fmt_g6(sec_raw.bits ? sec_raw.ber : nan) << ','
                         << fmt_g6(coded_s.bits ? coded_s.ber : nan) << ',' << raw.bits << ','
                         << raw.errors << ',' << fmt_g6(raw.ci95_halfwidth) << '\n';
        }
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Link-level analysis and simulation of QPSK/16QAM hierarchical modulation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(hm_version()));

    std::vector<double> lambdas;
    std::string cnr_text;
    std::string out_path;
    std::string penalty_kind;
    std::optional<double> basic_rate;
    std::string config_path;
    std::optional<uint64_t> seed_override;
    std::optional<std::string> mapping_override;
    std::optional<uint32_t> iterations_override;
    std::optional<std::string> prior_override;

    auto* penalty = app.add_subcommand("penalty", "Carrier-power penalty curves (CSV)");
    penalty->add_option("kind", penalty_kind, "mnr or ber")
        ->required()
        ->check(CLI::IsMember({"mnr", "ber"}));
    penalty->add_option("--lambda", lambdas, "hierarchy parameter, repeatable")->required();
    penalty->add_option("--cnr", cnr_text, "CNR sweep lo:hi:step in dB")->required();
    penalty->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* ber = app.add_subcommand("ber", "Raw bit-error-rate curves (CSV)");
    ber->add_option("--lambda", lambdas, "hierarchy parameter, repeatable")->required();
    ber->add_option("--cnr", cnr_text, "CNR sweep lo:hi:step in dB")->required();
    ber->add_option("--out", out_path, "output CSV path (default stdout)");

    auto* rate = app.add_subcommand("rate", "Secondary-vs-basic rate table");
    rate->add_option("--lambda", lambdas, "hierarchy parameter, repeatable")->required();
    double basic_rate_value = 0.0;
    auto* basic_rate_opt =
        rate->add_option("--basic-rate", basic_rate_value, "basic payload for absolute rates");
    rate->add_option("--out", out_path, "output path (default stdout)");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo link simulation from a config");
    simulate->add_option("--config", config_path, "key = value configuration file")->required();
    uint64_t seed_value = 0;
    auto* seed_opt = simulate->add_option("--seed", seed_value, "override the config seed");
    std::string mapping_value;
    auto* mapping_opt = simulate->add_option("--mapping", mapping_value, "gray or balanced")
                            ->check(CLI::IsMember({"gray", "balanced"}));
    uint32_t iterations_value = 0;
    auto* iterations_opt =
        simulate->add_option("--iterations", iterations_value, "decoding passes K");
    std::string prior_value;
    auto* prior_opt = simulate->add_option("--prior-mode", prior_value, "extrinsic or paper")
                          ->check(CLI::IsMember({"extrinsic", "paper"}));
    simulate->add_option("--out", out_path, "output CSV path (overrides config)");

    try {
        app.parse(argc, argv);
        if (*basic_rate_opt) basic_rate = basic_rate_value;
        if (*seed_opt) seed_override = seed_value;
        if (*mapping_opt) mapping_override = mapping_value;
        if (*iterations_opt) iterations_override = iterations_value;
        if (*prior_opt) prior_override = prior_value;

        if (penalty->parsed()) {
            for (double l : lambdas)
                if (!(l >= 0.0 && l <= 0.5)) die(kExitUsage, "lambda must lie in [0, 1/2]");
            return run_penalty(penalty_kind, lambdas, parse_cnr_range(cnr_text), out_path);
        }
        if (ber->parsed()) {
            for (double l : lambdas)
                if (!(l >= 0.0 && l <= 0.5)) die(kExitUsage, "lambda must lie in [0, 1/2]");
            return run_ber(lambdas, parse_cnr_range(cnr_text), out_path);
        }
        if (rate->parsed()) {
            for (double l : lambdas)
                if (!(l > 0.0 && l < 1.0)) die(kExitUsage, "lambda must lie in (0, 1)");
            return run_rate(lambdas, basic_rate, out_path);
        }
        if (simulate->parsed()) {
            SimConfig cfg = load_config(config_path);
            if (seed_override) cfg.seed = *seed_override;
            if (mapping_override) cfg.mapping = *mapping_override;
            if (iterations_override) cfg.iterations = *iterations_override;
            if (prior_override) cfg.prior_mode = *prior_override;
            if (!out_path.empty()) cfg.out = out_path;
            return run_simulate(cfg);
        }
        return kExitUsage;
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help / --version
        std::cerr << "hiermod: " << e.what() << '\n';
        return kExitUsage;
    } catch (const CliError& e) {
        std::cerr << "hiermod: " << e.message << '\n';
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "hiermod: " << e.what() << '\n';
        return kExitRuntime;
    }
}
