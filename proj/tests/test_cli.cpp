/** \file test_cli.cpp
 *  \brief Command-line driver tests: commands, output formats, round-trip
 *         stability, exit codes, configuration precedence.
 */
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "confinium/cli.hpp"

namespace cli = confinium::cli;

namespace {

struct RunResult {
    int code = 0;
    std::string out;
    std::string err;
};

RunResult run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    RunResult r;
    r.code = cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

bool contains(const std::string& haystack, const std::string& needle) {
    return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("solve prints the state report and passes its identity checks") {
    const auto r = run({"solve", "--system", "cha", "--rc", "1", "--state", "1s"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "2.373990866"));
    CHECK(contains(r.out, "(DV)^2"));
    CHECK(contains(r.out, "PASS"));
    CHECK(r.err.empty());
}

TEST_CASE("--digits controls the text precision") {
    const auto r = run({"solve", "--system", "cha", "--rc", "1", "--state", "1s",
                        "--digits", "12"});
    CHECK(r.code == 0);
    CHECK(contains(r.out, "2.3739908661"));   // 12 significant digits
    CHECK(contains(r.out, "5.07313646781"));  // <T> at 12 digits
    const auto rd = run({"solve", "--system", "cha", "--rc", "1", "--state", "1s"});
    CHECK_FALSE(contains(rd.out, "2.3739908661"));  // default is 10 digits
}

TEST_CASE("json output round-trips byte-identically") {
    const auto r = run({"solve", "--system", "cha", "--rc", "1", "--state", "1s",
                        "--output", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::ordered_json::parse(r.out);
    CHECK(doc.dump(2) + "\n" == r.out);
    // Document schema.
    CHECK(doc["version"].is_string());
    CHECK(doc["command"] == "solve");
    CHECK(doc["config"]["system"] == "cha");
    REQUIRE(doc["rows"].size() == 1);
    CHECK(doc["summary"]["pass"] == 1);
    CHECK(doc["summary"]["fail"] == 0);
    CHECK(doc["rows"][0]["identities_pass"] == true);
    // The infinite default is serialized as the string "inf".
    const auto rfree = run({"solve", "--system", "cha", "--state", "2p", "--output", "json"});
    const auto dfree = nlohmann::ordered_json::parse(rfree.out);
    CHECK(dfree["rows"][0]["system"]["r_c"] == "inf");
}

TEST_CASE("csv and json report identical numbers") {
    const std::vector<std::string> base = {"solve", "--system", "hicha", "--rc", "2",
                                           "--k", "4", "--state", "1s"};
    auto with_output = [&](const char* fmt) {
        auto args = base;
        args.push_back("--output");
        args.push_back(fmt);
        return run(args);
    };
    const auto rj = with_output("json");
    const auto rc = with_output("csv");
    REQUIRE(rj.code == 0);
    REQUIRE(rc.code == 0);

    const auto doc = nlohmann::ordered_json::parse(rj.out);
    // CSV: header line + one data row; field 2 is the energy.
    std::istringstream lines(rc.out);
    std::string header, row;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, row));
    CHECK(header ==
          "state,energy,energy_hartree,t,v,dT2,dV2,cross1,cross2,spread,t2_direct,"
          "t2_via_energy,t2_gap,dH2,schwartz_lhs,schwartz_rhs,identities_pass");
    std::vector<std::string> fields;
    std::istringstream fs(row);
    for (std::string f; std::getline(fs, f, ',');) fields.push_back(f);
    REQUIRE(fields.size() == 17);
    CHECK(std::stod(fields[1]) == doc["rows"][0]["energy"].get<double>());
    CHECK(std::stod(fields[5]) == doc["rows"][0]["dT2"].get<double>());
    CHECK(std::stod(fields[13]) == doc["rows"][0]["dH2"].get<double>());
}

TEST_CASE("table command reproduces a catalogue table") {
    const auto r = run({"table", "--id", "III", "--output", "json"});
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::ordered_json::parse(r.out);
    CHECK(doc["command"] == "table");
    CHECK(doc["rows"].size() == 90);
    CHECK(doc["summary"]["pass"] == 90);
    CHECK(doc["summary"]["fail"] == 0);
    CHECK(doc["summary"]["disputed"] == 0);
    CHECK(doc.dump(2) + "\n" == r.out);
    // Lower-case ids are accepted.
    const auto rt = run({"table", "--id", "iii"});
    CHECK(rt.code == 0);
    CHECK(contains(rt.out, "-> OK"));
}

TEST_CASE("sweep emits one row per parameter value") {
    const auto r = run({"sweep", "--system", "cha", "--state", "1s", "--param", "rc",
                        "--values", "1,2", "--output", "csv"});
    REQUIRE(r.code == 0);
    std::istringstream lines(r.out);
    std::string header, row1, row2;
    REQUIRE(std::getline(lines, header));
    REQUIRE(std::getline(lines, row1));
    REQUIRE(std::getline(lines, row2));
    CHECK(header ==
          "param,value,state,energy,energy_hartree,t,v,dT2,dV2,cross1,cross2,spread,"
          "t2_direct,t2_via_energy,t2_gap,dH2,schwartz_lhs,schwartz_rhs,identities_pass");
    CHECK(contains(row1, "r_c,1,1s,2.3739908661"));
    CHECK(contains(row2, "r_c,2,1s,-0.125"));
    // "inf" parses as a sweep value.
    const auto rfree = run({"sweep", "--system", "cha", "--state", "1s", "--param", "rc",
                            "--values", "5,inf", "--output", "json"});
    REQUIRE(rfree.code == 0);
    const auto doc = nlohmann::ordered_json::parse(rfree.out);
    REQUIRE(doc["rows"].size() == 2);
    CHECK(doc["rows"][1]["value"] == "inf");
    CHECK(doc["rows"][1]["energy"].get<double>() == doctest::Approx(-0.5).epsilon(1e-9));
}

TEST_CASE("selftest passes and reports its summary") {
    const auto r = run({"selftest", "--output", "json"});
    CHECK(r.code == 0);
    const auto doc = nlohmann::ordered_json::parse(r.out);
    CHECK(doc["command"] == "selftest");
    CHECK(doc["summary"]["fail"] == 0);
    CHECK(doc["summary"]["pass"].get<int>() >= 30);
}

TEST_CASE("exit codes: usage errors return 2, numeric failures 1, help 0") {
    CHECK(run({"solve", "--system", "cha", "--badflag"}).code == 2);
    CHECK(run({"table", "--id", "XII"}).code == 2);
    CHECK(run({"frobnicate"}).code == 2);
    CHECK(run({}).code == 2);
    CHECK(run({"solve", "--state", "1s"}).code == 2);  // --system missing
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(contains(help.out, "Usage"));

    // Asking for a state the potential cannot bind is a numeric failure:
    // exit 1 with a structured error object in json mode.
    const auto r = run({"solve", "--system", "spcha", "--rc", "1", "--v0", "0.05",
                        "--state", "2s", "--grid-n", "64", "--output", "json"});
    CHECK(r.code == 1);
    const auto doc = nlohmann::ordered_json::parse(r.out);
    CHECK(doc["error"]["type"] == "convergence");
    CHECK(doc["error"]["message"].is_string());
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("config file supplies defaults; command-line flags win") {
    const std::string path = "/tmp/confinium_test_config.conf";
    {
        std::ofstream f(path);
        f << "# test configuration\n"
          << "system=cha\n"
          << "rc=2\n"
          << "digits=12\n";
    }
    const auto r = run({"solve", "--state", "1s", "--config", path, "--output", "json"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::ordered_json::parse(r.out);
    CHECK(doc["config"]["params"]["r_c"] == 2.0);
    CHECK(doc["config"]["digits"] == 12);
    // A flag overrides the file value.
    const auto rf = run({"solve", "--state", "1s", "--config", path, "--rc", "1",
                         "--output", "json"});
    auto docf = nlohmann::ordered_json::parse(rf.out);
    CHECK(docf["config"]["params"]["r_c"] == 1.0);
    CHECK(docf["rows"][0]["energy"].get<double>() ==
          doctest::Approx(2.3739908661).epsilon(1e-9));
    std::remove(path.c_str());
}

TEST_CASE("the grid-resolution environment variable is honoured") {
    setenv("CONFINIUM_GRID_N", "96", 1);
    const auto r = run({"solve", "--system", "cha", "--rc", "1", "--state", "1s",
                        "--output", "json"});
    unsetenv("CONFINIUM_GRID_N");
    REQUIRE(r.code == 0);
    const auto doc = nlohmann::ordered_json::parse(r.out);
    CHECK(doc["config"]["grid_n"] == 96);
    CHECK(doc["rows"][0]["energy"].get<double>() ==
          doctest::Approx(2.3739908661).epsilon(1e-9));
    // An explicit flag beats the environment.
    setenv("CONFINIUM_GRID_N", "96", 1);
    const auto rf = run({"solve", "--system", "cha", "--rc", "1", "--state", "1s",
                         "--grid-n", "128", "--output", "json"});
    unsetenv("CONFINIUM_GRID_N");
    const auto docf = nlohmann::ordered_json::parse(rf.out);
    CHECK(docf["config"]["grid_n"] == 128);
}

TEST_CASE("--out redirects the report to a file") {
    const std::string path = "/tmp/confinium_test_out.json";
    const auto r = run({"solve", "--system", "cha", "--rc", "1", "--state", "1s",
                        "--output", "json", "--out", path});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(path);
    REQUIRE(f.good());
    std::stringstream buf;
    buf << f.rdbuf();
    const auto doc = nlohmann::ordered_json::parse(buf.str());
    CHECK(doc["command"] == "solve");
    std::remove(path.c_str());
}
