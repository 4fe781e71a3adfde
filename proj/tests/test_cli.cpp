// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct CommandResult {
    int exit_code;
    std::string output;
};

CommandResult run_cli(const std::string& args) {
    const std::string command = std::string(HIERMOD_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string output;
    char buffer[4096];
    while (size_t n = fread(buffer, 1, sizeof buffer, pipe)) output.append(buffer, n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), output};
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) lines.push_back(line);
    return lines;
}

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string temp_path(const std::string& name) {
    return std::string("/tmp/hiermod_cli_test_") + name;
}

} // namespace

TEST_CASE("penalty mnr emits the documented row format") {
    const CommandResult r = run_cli("penalty mnr --lambda 0.1 --cnr 7:7:1");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] == "cnr_db,lambda,penalty_db");
    CHECK(lines[1] == "7.0,0.1,0.254");
}

TEST_CASE("penalty rows are lambda-major with ascending cnr") {
    const CommandResult r = run_cli("penalty mnr --lambda 0.1 --lambda 0 --cnr 4:10:3");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 7);
    CHECK(fields_of(lines[1])[1] == "0.1");
    CHECK(fields_of(lines[3])[1] == "0.1");
    CHECK(fields_of(lines[4])[1] == "0");
    CHECK(fields_of(lines[1])[0] == "4.0");
    CHECK(fields_of(lines[2])[0] == "7.0");
    CHECK(fields_of(lines[3])[0] == "10.0");
    // lambda 0 penalties are identically zero
    for (int k = 4; k <= 6; ++k) CHECK(fields_of(lines[static_cast<size_t>(k)])[2] == "0.000");
}

TEST_CASE("penalty ber stays below a quarter dB at its raw 2e-2 anchor") {
    // CNR where the hierarchical raw BER reaches 2e-2 for lambda = 0.1
    const CommandResult r = run_cli("penalty ber --lambda 0.1 --cnr 6.4795365557735242:6.48:1");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 2);
    CHECK(std::stod(fields_of(lines[1])[2]) < 0.25);
}

TEST_CASE("invalid cnr ranges are usage errors") {
    CHECK(run_cli("penalty mnr --lambda 0.1 --cnr 10:4:1").exit_code == 1);
    CHECK(run_cli("penalty mnr --lambda 0.1 --cnr 4:10:0").exit_code == 1);
    CHECK(run_cli("penalty mnr --lambda 0.1 --cnr nonsense").exit_code == 1);
    CHECK(run_cli("penalty mnr --lambda 0.9 --cnr 4:10:1").exit_code == 1);
    const CommandResult r = run_cli("penalty mnr --lambda 0.1 --cnr 10:4:1");
    CHECK(lines_of(r.output).size() == 1); // single-line diagnostic
}

TEST_CASE("ber curves collapse to QPSK at lambda zero and decrease in cnr") {
    const CommandResult r = run_cli("ber --lambda 0 --lambda 0.1 --cnr 2:12:2");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 13);
    CHECK(lines[0] ==
          "cnr_db,lambda,ber_qpsk,ber_basic,ber_secondary,ber_basic_given_s1,ber_basic_given_s0");
    double prev_basic = 1.0;
    for (size_t k = 1; k <= 6; ++k) {
        const auto f = fields_of(lines[k]);
        CHECK(f[2] == f[3]); // lambda 0: basic and QPSK columns print identically
        CHECK(f[4] == "nan");
        const double basic = std::stod(f[3]);
        CHECK(basic < prev_basic);
        prev_basic = basic;
    }
    // lambda 0.1 at 8 dB carries a finite secondary column
    const auto f8 = fields_of(lines[10]);
    CHECK(f8[1] == "0.1");
    CHECK(std::stod(f8[4]) > 0.0);
}

TEST_CASE("ber row at the 7 dB operating point") {
    const CommandResult r = run_cli("ber --lambda 0.1 --cnr 7:7:1");
    CHECK(r.exit_code == 0);
    const auto lines = lines_of(r.output);
    REQUIRE(lines.size() == 2);
    const auto f = fields_of(lines[1]);
    CHECK(std::stod(f[3]) == doctest::Approx(0.0148125).epsilon(1e-4));
}

TEST_CASE("rate table prints the expected percentages") {
    const CommandResult r = run_cli("rate --lambda 0.1 --lambda 0.15 --basic-rate 100");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("1.23%") != std::string::npos);
    CHECK(r.output.find("3.11%") != std::string::npos);
    CHECK(r.output.find("1.235") != std::string::npos); // 100-channel equivalents
    CHECK(r.output.find("3.114") != std::string::npos);
    CHECK(run_cli("rate --lambda 0").exit_code == 1);
}

TEST_CASE("simulate runs a config and validates its content") {
    const std::string config = temp_path("sim.cfg");
    const std::string csv = temp_path("sim.csv");
    {
        std::ofstream out(config);
        out << "# smoke configuration\n"
               "lambda = 0\n"
               "cnr_db = 7\n"
               "frames = 25\n"
               "message_bits = 4096\n"
               "seed = 1234\n"
               "workers = 2\n";
    }
    const CommandResult r = run_cli("simulate --config " + config + " --out " + csv);
    CHECK(r.exit_code == 0);
    // the run log echoes effective settings, defaults included
    CHECK(r.output.find("seed = 1234") != std::string::npos);
    CHECK(r.output.find("iterations = 1") != std::string::npos);
    CHECK(r.output.find("mapping = gray") != std::string::npos);

    const auto lines = lines_of(read_file(csv));
    REQUIRE(lines.size() == 2);
    CHECK(lines[0] ==
          "cnr_db,lambda,iteration,ber_basic_raw,ber_basic_coded,ber_secondary_raw,"
          "ber_secondary_coded,bits,errors_basic_raw,ci_halfwidth_basic_raw");
    const auto f = fields_of(lines[1]);
    REQUIRE(f.size() == 10);
    // lambda 0: the raw BER lands within its own confidence band of the QPSK formula
    const double ber = std::stod(f[3]);
    const double ci = std::stod(f[9]);
    CHECK(std::abs(ber - 0.012587033122144615) <= 1.5 * ci);
    CHECK(f[5] == "nan"); // no secondary stream at lambda 0
    CHECK(f[6] == "nan");
    std::remove(config.c_str());
    std::remove(csv.c_str());
}

TEST_CASE("simulate reruns are byte identical") {
    const std::string config = temp_path("det.cfg");
    const std::string csv_a = temp_path("det_a.csv");
    const std::string csv_b = temp_path("det_b.csv");
    {
        std::ofstream out(config);
        out << "lambda = 0.15\n"
               "cnr_db = 7\n"
               "frames = 6\n"
               "message_bits = 1024\n"
               "seed = 5\n"
               "iterations = 2\n";
    }
    CHECK(run_cli("simulate --config " + config + " --out " + csv_a).exit_code == 0);
    CHECK(run_cli("simulate --config " + config + " --out " + csv_b).exit_code == 0);
    CHECK(read_file(csv_a) == read_file(csv_b));
    std::remove(config.c_str());
    std::remove(csv_a.c_str());
    std::remove(csv_b.c_str());
}

TEST_CASE("simulate config errors name the offending line") {
    const std::string config = temp_path("bad.cfg");
    {
        std::ofstream out(config);
        out << "lambda = 0.1\n"
               "cnr_db = 7\n"
               "bogus_key = 3\n";
    }
    const CommandResult r = run_cli("simulate --config " + config);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find(":3:") != std::string::npos);
    CHECK(r.output.find("bogus_key") != std::string::npos);

    {
        std::ofstream out(config);
        out << "frames = 10\n";
    }
    const CommandResult empty = run_cli("simulate --config " + config);
    CHECK(empty.exit_code == 1);
    CHECK(empty.output.find("no operating points") != std::string::npos);

    CHECK(run_cli("simulate --config /nonexistent/path.cfg").exit_code == 1);
    std::remove(config.c_str());
}

TEST_CASE("usage errors exit with code 1") {
    CHECK(run_cli("").exit_code == 1);
    CHECK(run_cli("penalty").exit_code == 1);
    CHECK(run_cli("penalty sideways --lambda 0.1 --cnr 4:10:1").exit_code == 1);
    CHECK(run_cli("frobnicate").exit_code == 1);
}

TEST_CASE("help and version exit cleanly") {
    CHECK(run_cli("--help").exit_code == 0);
    CHECK(run_cli("--version").exit_code == 0);
}
