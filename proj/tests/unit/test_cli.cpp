#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

std::string required_env(const char* name) {
    const char* v = std::getenv(name);
    REQUIRE_MESSAGE(v != nullptr, "environment variable " << name << " must point at the CLI");
    return v;
}

std::string bin() { return required_env("SCHOTTKYLAB_BIN"); }
std::string groups() { return required_env("SCHOTTKY_GROUPS_DIR"); }

const std::string kScratch = "cli-scratch";

int run(const std::string& args) {
    fs::create_directories(kScratch);
    const std::string cmd = bin() + " " + args + " > " + kScratch + "/last.log 2>&1";
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -2;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE_MESSAGE(in.good(), "missing file " << path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> data_rows(const std::string& csv_text) {
    std::vector<std::string> rows;
    std::istringstream in(csv_text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        rows.push_back(line);
    }
    return rows;
}

std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string f;
    while (std::getline(in, f, sep)) out.push_back(f);
    return out;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate accepts the shipped groups and writes a well-formed manifest") {
    const std::string man = kScratch + "/validate.json";
    const int rc = run("validate --group " + groups() + "/symmetric-p2.cfg --manifest " + man);
    CHECK(rc == 0);
    // validate reports on stdout (captured in last.log), not as a table.
    const std::string log = slurp(kScratch + "/last.log");
    CHECK(log.find("validation: pass") != std::string::npos);
    CHECK(log.find("basis_order=103") != std::string::npos);

    const nlohmann::json j = nlohmann::json::parse(slurp(man));
    CHECK(j.at("command") == "validate");
    CHECK(j.at("group_hash").get<std::string>().size() == 16);
    CHECK(j.at("wall_time_s").get<double>() >= 0.0);
    CHECK(j.contains("params"));
    CHECK(j.contains("results"));
    CHECK(j.contains("version"));
}

TEST_CASE("usage errors exit with 2 and write nothing") {
    const std::string out = kScratch + "/never-written.csv";
    fs::remove(out);
    CHECK(run("resonances --group " + groups() + "/cylinder.cfg --definitely-not-a-flag --out " +
              out) == 2);
    CHECK(run("") == 2);                        // missing subcommand
    CHECK(run("lengths --T 5") == 2);           // missing required --group
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("domain failures exit with 1") {
    // Two identical generators: coinciding isometric discs.
    const std::string bad = kScratch + "/broken.cfg";
    fs::create_directories(kScratch);
    std::ofstream(bad) << "schottky-group v1\nmodel halfplane\nrank 2\ngen 2 1 1 1\ngen 2 1 1 1\n";
    CHECK(run("validate --group " + bad + " --out " + kScratch + "/broken.csv") == 1);

    // Dimension of a cylinder: the pressure route rejects rank one.
    CHECK(run("dim --group " + groups() + "/cylinder.cfg --out " + kScratch + "/dim-cyl.csv") == 1);

    // Euler product left of its convergence abscissa.
    CHECK(run("zeta-eval --group " + groups() + "/symmetric-p2.cfg --s 0.3,0 --method product"
              " --out " + kScratch + "/zp.csv") == 1);
}

TEST_CASE("resonance search output is reproducible byte for byte") {
    const std::string base = " resonances --group " + groups() +
                             "/cylinder.cfg --rect -0.5,0.5,2.5,3.7 --step 0.05";
    const std::string a = kScratch + "/res-a.csv", b = kScratch + "/res-b.csv";
    CHECK(run(base + " --out " + a + " --manifest " + kScratch + "/res-a.json") == 0);
    CHECK(run(base + " --out " + b + " --manifest " + kScratch + "/res-b.json") == 0);
    CHECK(slurp(a) == slurp(b));

    const auto rows = data_rows(slurp(a));
    REQUIRE(rows.size() == 1);  // the double zero at i*pi
    const auto fields = split(rows[0]);
    REQUIRE(fields.size() >= 4);
    CHECK(std::abs(std::stod(fields[0])) < 1e-8);
    CHECK(std::stod(fields[1]) == doctest::Approx(3.14159265).epsilon(1e-7));
    CHECK(std::stoi(fields[2]) == 2);
    CHECK(std::stod(fields[3]) < 1e-8);
}

TEST_CASE("the scan grid dump is written on request") {
    const std::string out = kScratch + "/res-grid.csv", grid = kScratch + "/grid.csv";
    CHECK(run("resonances --group " + groups() + "/cylinder.cfg --rect -0.3,0.3,2.8,3.5"
              " --step 0.1 --out " + out + " --grid-dump " + grid) == 0);
    const auto rows = data_rows(slurp(grid));
    // Nominally a 7x8 grid; allow one sample of slack per axis for the
    // floor((max-min)/step) endpoint arithmetic.
    CHECK(rows.size() >= 6 * 7);
    CHECK(rows.size() <= 8 * 9);
    CHECK(split(rows[0]).size() == 3);  // re, im, log|Z|
}

TEST_CASE("length spectra are deterministic and in CSV schema") {
    const std::string a = kScratch + "/len-a.csv", b = kScratch + "/len-b.csv";
    const std::string base = "lengths --group " + groups() + "/cylinder.cfg --T 9";
    CHECK(run(base + " --out " + a) == 0);
    CHECK(run(base + " --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    const auto rows = data_rows(slurp(a));
    REQUIRE(rows.size() == 4);
    for (size_t k = 0; k < rows.size(); ++k) {
        const auto f = split(rows[k]);
        REQUIRE(f.size() == 5);  // ell, prime_length, k, multiplicity, word
        CHECK(std::stod(f[0]) == doctest::Approx(2.0 * double(k + 1)).epsilon(1e-12));
        CHECK(std::stoi(f[2]) == int(k + 1));
        // Oriented classes: the core geodesic and its reverse are distinct.
        CHECK(std::stoi(f[3]) == 2);
        CHECK_FALSE(f[4].empty());
    }
}

TEST_CASE("zeta evaluation succeeds for both determinant routes") {
    const std::string out = kScratch + "/zeta.csv";
    CHECK(run("zeta-eval --group " + groups() + "/cylinder.cfg --s 0.5,0 --method fredholm"
              " --out " + out) == 0);
    // Columns: s_re, s_im, method, order, value_re, value_im, error_estimate.
    auto f = split(data_rows(slurp(out)).at(0));
    REQUIRE(f.size() == 7);
    CHECK(f[2] == "fredholm");
    const double fredholm_re = std::stod(f[4]);
    CHECK(std::abs(std::stod(f[5])) < 1e-12);  // real s, real value

    CHECK(run("zeta-eval --group " + groups() + "/cylinder.cfg --s 0.5,0 --method cycle --out " +
              out) == 0);
    f = split(data_rows(slurp(out)).at(0));
    REQUIRE(f.size() == 7);
    CHECK(std::stod(f[4]) == doctest::Approx(fredholm_re).epsilon(1e-9));
}

TEST_CASE("lattice counts agree under exchanging the base points") {
    const std::string a = kScratch + "/count-a.csv", b = kScratch + "/count-b.csv";
    CHECK(run("count --group " + groups() + "/generic-p2.cfg --T 4,6,8 --z 0.3,1.8 --zp 1.0,1.5"
              " --out " + a) == 0);
    CHECK(run("count --group " + groups() + "/generic-p2.cfg --T 4,6,8 --z 1.0,1.5 --zp 0.3,1.8"
              " --out " + b) == 0);
    const auto ra = data_rows(slurp(a)), rb = data_rows(slurp(b));
    REQUIRE(ra.size() == 3);
    REQUIRE(rb.size() == 3);
    long long prev = -1;
    for (size_t i = 0; i < ra.size(); ++i) {
        const long long na = std::stoll(split(ra[i])[1]);
        const long long nb = std::stoll(split(rb[i])[1]);
        CHECK(na == nb);
        CHECK(na >= prev);
        prev = na;
    }
}

TEST_CASE("trace-check verifies the cylinder identity end to end") {
    const std::string out = kScratch + "/trace.csv";
    CHECK(run("trace-check --group " + groups() + "/cylinder.cfg --T 6 --tail-tol 1e-3 --out " +
              out) == 0);
    const auto rows = data_rows(slurp(out));
    REQUIRE(rows.size() == 1);
    const auto f = split(rows[0]);
    REQUIRE(f.size() == 8);  // T, rho, geodesic re/im, resonance re/im, |residual|, bound
    CHECK(std::stod(f[6]) <= std::stod(f[7]));
}

TEST_CASE("strip census reuses an existing resonance list") {
    const std::string res = kScratch + "/strip-in.csv";
    CHECK(run("resonances --group " + groups() + "/cylinder.cfg --rect -0.5,0.5,2.5,3.7"
              " --step 0.05 --out " + res) == 0);
    const std::string out = kScratch + "/strip.csv";
    CHECK(run("strip --group " + groups() + "/cylinder.cfg --sigma -0.1 --T 4 --resonances " +
              res + " --out " + out) == 0);
    CHECK_FALSE(data_rows(slurp(out)).empty());
}

TEST_CASE("mean-square and moments produce their reports") {
    CHECK(run("mean-square --group " + groups() + "/cylinder.cfg --sigma 1 --T 5 --out " +
              kScratch + "/ms.csv --manifest " + kScratch + "/ms.json") == 0);
    const nlohmann::json j = nlohmann::json::parse(slurp(kScratch + "/ms.json"));
    CHECK(j.at("command") == "mean-square");

    CHECK(run("moments --group " + groups() + "/integer-p2.cfg --T 8 --out " + kScratch +
              "/mom.csv") == 0);
    CHECK_FALSE(data_rows(slurp(kScratch + "/mom.csv")).empty());
}

TEST_CASE("residual ladders run end to end deterministically") {
    const std::string a = kScratch + "/resid-a.csv", b = kScratch + "/resid-b.csv";
    const std::string base = "residuals --group " + groups() +
                             "/generic-p2.cfg --T-min 4 --T-max 8 --samples 6 --z 0.3,1.8";
    CHECK(run(base + " --out " + a) == 0);
    CHECK(run(base + " --out " + b) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(data_rows(slurp(a)).size() == 6);
}

TEST_CASE("json output format is valid json") {
    const std::string out = kScratch + "/len.json";
    CHECK(run("lengths --group " + groups() + "/cylinder.cfg --T 7 --format json --out " + out) ==
          0);
    const nlohmann::json rows = nlohmann::json::parse(slurp(out));
    REQUIRE(rows.is_array());
    CHECK(rows.size() == 3);
    CHECK(rows[0].contains("ell"));
}

}  // TEST_SUITE
