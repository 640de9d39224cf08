#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "hlmax/constants.hpp"
#include "hlmax/piecewise_linear.hpp"
#include "hlmax/plf_json.hpp"
#include "oracles.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#ifndef HLMAX_CLI_PATH
#error "HLMAX_CLI_PATH must point at the built CLI binary"
#endif

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    RunResult r;
    const std::string cmd = std::string(HLMAX_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int st = pclose(pipe);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

// Parse CSV text into rows of doubles, skipping the header line.
std::vector<std::vector<double>> parse_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream is(text);
    std::string line;
    bool first = true;
    while (std::getline(is, line)) {
        if (first) {
            first = false;
            continue;
        }
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) row.push_back(std::strtod(field.c_str(), nullptr));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string scratch_dir() {
    static const std::string dir = [] {
        std::string d = std::filesystem::temp_directory_path() / "hlmax_cli_scratch";
        std::filesystem::create_directories(d);
        return d;
    }();
    return dir;
}

std::string write_file(const std::string& name, const std::string& content) {
    const std::string path = scratch_dir() + "/" + name;
    std::ofstream os(path);
    os << content;
    return path;
}

std::string read_file(const std::string& path) {
    std::ifstream is(path);
    std::ostringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

} // namespace

TEST_CASE("constants: certified table, batch runs, usage rejection") {
    const RunResult one = run_cli("constants --p 2");
    CHECK_EQ(one.code, 0);
    const auto rows = parse_csv(one.out);
    REQUIRE_EQ(rows.size(), 1);
    REQUIRE_GE(rows[0].size(), 7);
    CHECK_EQ(rows[0][0], 2.0);
    CHECK_LE(std::fabs(rows[0][1] - oracle::kTau2), 1e-12);
    CHECK_LE(std::fabs(rows[0][2] - oracle::kC2), 1e-12);
    CHECK_LE(std::fabs(rows[0][5] - oracle::kR2Alpha0), 1e-12);
    CHECK_LE(rows[0][6], 1e-10); // cross-check gap column

    CHECK_EQ(run_cli("constants --p 0.5").code, 2);
    CHECK_EQ(run_cli("constants --p 2 --format xml").code, 2);
    CHECK_EQ(run_cli("constants --p 2 --nonsense-flag").code, 2);

    const RunResult batch = run_cli("constants --p 1.5,2,3,5,10");
    CHECK_EQ(batch.code, 0);
    CHECK_EQ(parse_csv(batch.out).size(), 5);

    const RunResult js = run_cli("constants --p 2 --format json");
    CHECK_EQ(js.code, 0);
    CHECK(js.out.find("\"ok\":true") != std::string::npos);
}

TEST_CASE("maxfn: tent profile rows, symmetry, input validation") {
    const std::string tent_path =
        write_file("tent.json", hlmax::to_json_string(hlmax::tent()));

    const RunResult r = run_cli("maxfn --fn " + tent_path + " --grid 3,0.5,2");
    CHECK_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    REQUIRE_EQ(rows.size(), 6);
    // columns: x, g, delta, s, gprime
    CHECK_EQ(rows[5][0], 2.0);
    CHECK_LE(std::fabs(rows[5][1] - oracle::kTentMf2), 1e-10);
    CHECK_LE(std::fabs(rows[5][2] - oracle::kSqrt7), 1e-8);
    // mirrored grid: g even, s odd, exactly as printed
    for (int i = 0; i < 3; ++i) {
        CHECK_EQ(rows[i][0], -rows[5 - i][0]);
        CHECK_EQ(rows[i][1], rows[5 - i][1]);
        CHECK_EQ(rows[i][3], -rows[5 - i][3]);
    }

    CHECK_EQ(run_cli("maxfn --fn /nonexistent/path.json").code, 2);
    const std::string bad = write_file("bad.json", "this is not json");
    CHECK_EQ(run_cli("maxfn --fn " + bad).code, 2);
    const std::string badgrid = "maxfn --fn " + tent_path + " --grid 5,2,1";
    CHECK_EQ(run_cli(badgrid).code, 2);
}

TEST_CASE("maxfn: non-peak-shaped input is exploratory unless gated") {
    const std::string ramp_path =
        write_file("ramp.json", hlmax::to_json_string(hlmax::ramp_indicator(1.0, 1e-4)));
    CHECK_EQ(run_cli("maxfn --fn " + ramp_path + " --grid 60").code, 0);
    CHECK_EQ(run_cli("maxfn --fn " + ramp_path + " --grid 60 --require-peak").code, 2);
}

TEST_CASE("sharpness: family gates and exit codes") {
    CHECK_EQ(run_cli("sharpness --p 2 --caps 10").code, 2);       // family too small
    CHECK_EQ(run_cli("sharpness --p 1 --caps 10,100,1000").code, 2);
    CHECK_EQ(run_cli("sharpness --p 2 --caps 0.5,10,100").code, 2);

    const RunResult r = run_cli("sharpness --p 2 --caps 10,100,1000");
    CHECK_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    REQUIRE_EQ(rows.size(), 3);
    const double c2 = hlmax::c_p(2.0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK_LE(rows[i][1], c2 * (1.0 + 1e-6));
        if (i) CHECK_GE(rows[i][1], rows[i - 1][1]);
    }
    CHECK_GE(rows[2][1], 0.95 * c2);

    // a family stopped far from the limit fails the final-band gate: exit 1
    CHECK_EQ(run_cli("sharpness --p 2 --caps 2,4,8").code, 1);
}

TEST_CASE("variational: chain certification and domain rejection") {
    // default input is the tent
    CHECK_EQ(run_cli("variational --p 2").code, 0);
    CHECK_EQ(run_cli("variational --p 2 --alpha 0.3").code, 2);
    CHECK_EQ(run_cli("variational --p 1").code, 2);
    CHECK_EQ(run_cli("variational --p 2,3").code, 2);

    const RunResult js = run_cli("variational --p 2 --format json");
    CHECK_EQ(js.code, 0);
    CHECK(js.out.find("\"ok\":true") != std::string::npos);
    CHECK(js.out.find("\"ok_transport\":true") != std::string::npos);

    // seeded sweep over the random corpus
    CHECK_EQ(run_cli("variational --p 2 --sweep 20 --seed 1 --grid 800").code, 0);
}

TEST_CASE("weaktype: level-set ratios and validation") {
    const RunResult high = run_cli("weaktype --lambdas 2");
    CHECK_EQ(high.code, 0);
    const auto hrows = parse_csv(high.out);
    REQUIRE_EQ(hrows.size(), 1);
    CHECK_EQ(hrows[0][1], 0.0); // lambda above sup Mf

    CHECK_EQ(run_cli("weaktype --lambdas -0.5").code, 2);
    CHECK_EQ(run_cli("weaktype --lambdas 0").code, 2);

    const RunResult r = run_cli("weaktype --lambdas 0.001,0.00316,0.01,0.0316,0.1,0.316,1");
    CHECK_EQ(r.code, 0);
    const auto rows = parse_csv(r.out);
    REQUIRE_EQ(rows.size(), 7);
    double sup = 0.0;
    for (const auto& row : rows) {
        CHECK_LE(row[1], 1.0 + 1e-6);
        sup = std::max(sup, row[1]);
    }
    CHECK_GE(sup, 0.95);

    // default level grid spans three decades below the peak
    const RunResult dflt = run_cli("weaktype");
    CHECK_EQ(dflt.code, 0);
    CHECK_EQ(parse_csv(dflt.out).size(), 13);
}

TEST_CASE("outputs: repeat runs and thread counts are byte-identical") {
    const std::string tent_path =
        write_file("tent2.json", hlmax::to_json_string(hlmax::tent()));
    const std::string a = scratch_dir() + "/a.csv";
    const std::string b = scratch_dir() + "/b.csv";

    CHECK_EQ(run_cli("maxfn --fn " + tent_path + " --grid 200 --out " + a).code, 0);
    CHECK_EQ(run_cli("maxfn --fn " + tent_path + " --grid 200 --out " + b).code, 0);
    const std::string ta = read_file(a), tb = read_file(b);
    CHECK_FALSE(ta.empty());
    CHECK_EQ(ta, tb);

    const std::string c1 = scratch_dir() + "/c1.csv";
    const std::string c4 = scratch_dir() + "/c4.csv";
    CHECK_EQ(run_cli("maxfn --fn " + tent_path + " --grid 200 --threads 1 --out " + c1).code, 0);
    CHECK_EQ(run_cli("maxfn --fn " + tent_path + " --grid 200 --threads 4 --out " + c4).code, 0);
    CHECK_EQ(read_file(c1), read_file(c4));

    const std::string k1 = scratch_dir() + "/k1.csv";
    const std::string k4 = scratch_dir() + "/k4.csv";
    CHECK_EQ(run_cli("constants --p 2,3 --threads 1 --out " + k1).code, 0);
    CHECK_EQ(run_cli("constants --p 2,3 --threads 4 --out " + k4).code, 0);
    CHECK_EQ(read_file(k1), read_file(k4));
}
