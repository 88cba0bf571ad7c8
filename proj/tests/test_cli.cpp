#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "qtails/cli.hpp"
#include "qtails/registry.hpp"

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = qtails::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json without_timing(nlohmann::json j)
{
    j["summary"]["elapsed_ms"] = 0;
    for (auto &r : j["reports"]) {
        r["elapsed_ms"] = 0;
    }
    return j;
}

nlohmann::json golden(const std::string &name)
{
    std::ifstream f(std::string(QTAILS_TEST_DATA_DIR) + "/golden/" + name);
    REQUIRE(f.good());
    return nlohmann::json::parse(f);
}

std::vector<std::string> lines(const std::string &s)
{
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) {
        out.push_back(l);
    }
    return out;
}

} // namespace

TEST_CASE("verify exit codes")
{
    CHECK(run({"verify", "--identity", "all", "--order", "0", "--j-max", "0", "--z-cap", "0"}).code == 0);
    CHECK(run({"verify", "--identity", "BDQ", "--order", "30"}).code == 0);

    const auto nope = run({"verify", "--identity", "NOPE"});
    CHECK(nope.code == 2);
    for (const auto &id : qtails::registry::ids()) {
        CHECK(nope.err.find(id) != std::string::npos);
    }

    CHECK(run({"verify", "--identity", "R1", "--order", "10", "--mutation", "sigma_shift"}).code == 1);
    CHECK(run({"verify", "--identity", "T1", "--order", "10", "--cap", "b=1"}).code == 2);
    CHECK(run({"verify", "--identity", "R1", "--cap", "b"}).code == 2);
    CHECK(run({"verify", "--identity", "R1", "--mutation", "nonsense"}).code == 2);
    CHECK(run({"verify", "--identity", "R1", "--format", "yaml"}).code == 2);
    CHECK(run({"verify", "--order", "-1"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("exit code follows injected failures")
{
    // Every mutation makes the full run exit 1 (or 2 when a tail also
    // refuses to stabilize); the clean run exits 0.
    for (auto m : qtails::registry::all_mutations()) {
        const auto r = run({"verify", "--order", "8", "--j-max", "4", "--z-cap", "3", "--mutation",
                            std::string(qtails::registry::to_string(m))});
        CHECK_MESSAGE(r.code != 0, qtails::registry::to_string(m));
    }
    CHECK(run({"verify", "--identity", "SIG2", "--order", "8", "--mutation", "sigma2_shift"}).code == 1);
}

TEST_CASE("coeffs examples")
{
    CHECK(run({"coeffs", "--function", "sigma", "--order", "3"}).out == "0 1\n1 1\n2 -1\n3 2\n");
    CHECK(run({"coeffs", "--function", "sigma2", "--order", "2", "--format", "csv"}).out == "n,c\n0,1\n1,-1\n2,1\n");
    const auto lam = run({"coeffs", "--function", "lambert", "--a", "1", "--b", "1", "--order", "4", "--format",
                          "json"});
    REQUIRE(lam.code == 0);
    auto j = nlohmann::json::parse(lam.out);
    std::vector<std::string> cs;
    for (const auto &row : j["coefficients"]) {
        cs.push_back(row["c"]);
    }
    CHECK(cs == std::vector<std::string>{"0", "1", "2", "2", "3"});
    CHECK(run({"coeffs", "--function", "partition_gf", "--order", "10"}).out.find("10 42\n") != std::string::npos);
    CHECK(run({"coeffs", "--function", "sigma_star", "--order", "2"}).out == "0 0\n1 -2\n2 -2\n");
    CHECK(run({"coeffs", "--function", "zeta"}).code == 2);
    CHECK(run({"coeffs", "--function", "lambert", "--b", "0"}).code == 2);
}

TEST_CASE("partitions examples")
{
    CHECK(run({"partitions", "--count", "p1", "--n", "6"}).out == "p1(6) = 2\n");
    CHECK(run({"partitions", "--count", "p1", "--n", "7"}).out == "p1(7) = -1\n");
    CHECK(run({"partitions", "--count", "p2", "--n", "6", "--list"}).out ==
          "p2(6) = 3\n  6  +1\n  4+1+1  +1\n  2+2+2  +1\n");
    CHECK(run({"partitions", "--count", "tau_o", "--n", "1"}).out == "tau_o(1) = 1\n");
    CHECK(run({"partitions", "--count", "tau_e", "--n", "6", "--list"}).out == "tau_e(6) = 2\n  2  +1\n  6  +1\n");
    CHECK(run({"partitions", "--count", "sigma_weight", "--n", "3"}).out == "sigma_weight(3) = 2\n");
    CHECK(run({"partitions", "--count", "sigma2_weight", "--n", "2"}).out == "sigma2_weight(2) = 1\n");
    CHECK(run({"partitions", "--count", "ae_ao", "--n", "3", "--j", "2"}).out == "ae_ao(3) = 0\n");
    CHECK(run({"partitions", "--count", "ae_ao", "--n", "0"}).out == "ae_ao(0) = 1\n");
    CHECK(run({"partitions", "--count", "p2", "--from", "1", "--to", "3", "--format", "csv"}).out ==
          "n,count\n1,0\n2,1\n3,0\n");
    CHECK(run({"partitions", "--count", "p1", "--n", "0"}).code == 2);
    CHECK(run({"partitions", "--count", "p1", "--from", "5", "--to", "2"}).code == 2);
    CHECK(run({"partitions", "--count", "nope", "--n", "3"}).code == 2);
}

TEST_CASE("JSON output matches the golden files")
{
    const auto pass = run({"verify", "--identity", "BDQ,AO21,T3", "--order", "8", "--n-max", "10", "--format", "json"});
    REQUIRE(pass.code == 0);
    CHECK(without_timing(nlohmann::json::parse(pass.out)) == golden("verify_pass.json"));

    const auto fail = run({"verify", "--identity", "R1", "--identity", "SIG", "--order", "10", "--mutation",
                           "sigma_shift", "--format", "json"});
    REQUIRE(fail.code == 1);
    CHECK(without_timing(nlohmann::json::parse(fail.out)) == golden("verify_fail.json"));
}

TEST_CASE("report schema")
{
    const auto r = run({"report", "--order", "0", "--j-max", "0", "--z-cap", "0", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["reports"].size() >= 24);
    CHECK(j["reports"].size() == qtails::registry::registry().size());
    for (const auto &e : j["reports"]) {
        for (const char *key : {"id", "paper_ref", "order", "caps", "status", "first_mismatch", "elapsed_ms"}) {
            CHECK_MESSAGE(e.contains(key), key);
        }
        CHECK(e["status"] == "pass");
        CHECK(e["first_mismatch"].is_null());
    }
    const auto md = run({"report", "--order", "0", "--j-max", "0", "--z-cap", "0"});
    CHECK(md.code == 0);
    CHECK(md.out.find("| BDQ |") != std::string::npos);
    CHECK(run({"report", "--format", "csv"}).code == 2);
}

TEST_CASE("text and CSV output are deterministic")
{
    for (const char *fmt : {"text", "csv"}) {
        const std::vector<std::string> base = {"verify", "--order", "6", "--j-max", "3", "--z-cap", "2",
                                               "--format", fmt, "--no-timing"};
        auto a = base, b = base;
        a.insert(a.end(), {"--threads", "1"});
        b.insert(b.end(), {"--threads", "4"});
        const auto ra = run(a), rb = run(b);
        CHECK(ra.code == 0);
        CHECK(ra.out == rb.out);
        CHECK(ra.out == run(a).out);
        CHECK_FALSE(std::regex_search(ra.out, std::regex("[0-9]ms")));
    }
    // With timing the documents differ only in the time fields.
    const std::regex ms("[0-9]+\\.[0-9]+ms");
    const std::vector<std::string> timed = {"verify", "--identity", "R1,F2", "--order", "6"};
    CHECK(std::regex_replace(run(timed).out, ms, "T") == std::regex_replace(run(timed).out, ms, "T"));
}

TEST_CASE("output path")
{
    const auto path = std::filesystem::temp_directory_path() / "qtails_cli_test.csv";
    const auto r = run({"coeffs", "--function", "sigma", "--order", "3", "--format", "csv", "--out", path.string()});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(lines(ss.str()) == std::vector<std::string>{"n,c", "0,1", "1,1", "2,-1", "3,2"});
    std::filesystem::remove(path);

    CHECK(run({"report", "--order", "0", "--out", "/nonexistent-dir/x/report.md"}).code == 2);
}
