// Drives the installed cdsphere binary end to end.
#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <json.hpp>

#ifndef CDSPHERE_CLI_PATH
#error "CDSPHERE_CLI_PATH must point at the cdsphere binary"
#endif

namespace {

using nlohmann::json;

struct RunResult {
    int exit_code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(CDSPHERE_CLI_PATH) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf;
    std::size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), got);
    const int status = pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST_CASE("cd-check emits the analytic certificate") {
    const auto r = run_cli("cd-check --n 2 --alpha 1");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["version"].is_string());
    REQUIRE(j["command"] == "cd-check");
    REQUIRE(j["config"]["params"]["n"] == 2);
    REQUIRE(j["result"]["rho_analytic"].get<double>() == Catch::Approx(0.25));
    REQUIRE(j["result"]["rho_numeric"].get<double>() == Catch::Approx(0.25).margin(1e-9));
    REQUIRE(j["result"]["N"].get<double>() == -1.0);
}

TEST_CASE("spectrum reports the gap inside the known window") {
    const auto r = run_cli("spectrum --n 3 --alpha 1 --s 0.7");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    const double lambda = j["result"]["spectral"]["extrapolated"].get<double>();
    REQUIRE(lambda >= 1.0);
    REQUIRE(lambda <= 3.0 * 1.005);
    REQUIRE(j["result"]["all_bounds_ok"] == true);
}

TEST_CASE("sample is deterministic across runs") {
    const auto a = run_cli("sample --n 2 --alpha 1 --s 0 --count 10 --seed 1");
    const auto b = run_cli("sample --n 2 --alpha 1 --s 0 --count 10 --seed 1");
    REQUIRE(a.exit_code == 0);
    REQUIRE(a.out == b.out);
    REQUIRE(a.out.rfind("theta\n", 0) == 0);
    const auto c = run_cli("sample --n 2 --alpha 1 --s 0 --count 10 --seed 2");
    REQUIRE(c.out != a.out);
}

TEST_CASE("min-f returns the boundary minimum") {
    const auto r = run_cli("min-f --radius 1 --p 1");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["result"]["min"].get<double>() == Catch::Approx(-0.25).margin(1e-9));
}

TEST_CASE("ks cross-validates the two samplers") {
    const auto r = run_cli("ks --n 2 --s 0.5 --count 4000 --seed 11 --eps 1e-6");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["result"]["p_value"].get<double>() > 0.01);
}

TEST_CASE("isop-check emits csv rows and passes") {
    const auto r = run_cli("isop-check --n 2 --alpha 1 --s 0.5 --grid 50 --format csv");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.rfind("theta0,v,boundary_measure,lower_bound,slack\n", 0) == 0);
    REQUIRE(std::count(r.out.begin(), r.out.end(), '\n') == 51);
}

TEST_CASE("alpha-scan csv has the documented columns") {
    const auto r = run_cli("alpha-scan --n 2 --s 0.5 --alpha -2,0,1 --format csv");
    REQUIRE(r.exit_code == 0);
    REQUIRE(r.out.rfind("alpha,s,lambda,sector,rho,lower_bound_cor14,bmz_low,bmz_high\n", 0) == 0);
}

TEST_CASE("usage errors exit with code 1") {
    REQUIRE(run_cli("density --n 1 --alpha 1 --s 0").exit_code == 1);
    REQUIRE(run_cli("sample --n 2 --alpha 1 --s 2 --count 5 --seed 1").exit_code == 1);
    REQUIRE(run_cli("nosuchcommand").exit_code != 0);
    REQUIRE(run_cli("density --n 2 --unknown-flag 3").exit_code != 0);
}

TEST_CASE("tolerance overrides: known keys apply, unknown keys are rejected") {
    const auto r = run_cli("density --n 2 --alpha 1 --s 0.3 --grid 3 --tol quad=1e-8");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["config"]["tolerances"]["quad"].get<double>() == 1e-8);
    REQUIRE(run_cli("density --n 2 --alpha 1 --s 0.3 --tol bogus=1e-8").exit_code == 1);
    REQUIRE(run_cli("density --n 2 --alpha 1 --s 0.3 --tol quad=-1").exit_code == 1);
}

TEST_CASE("norm-check euclidean epsilon") {
    const auto r = run_cli("norm-check --n 3 --count 500 --seed 5");
    REQUIRE(r.exit_code == 0);
    const json j = json::parse(r.out);
    REQUIRE(j["result"]["epsilon"].get<double>() == Catch::Approx(1.0).margin(1e-6));
    REQUIRE(j["result"]["implied_rho"].get<double>() == Catch::Approx(2.0).margin(1e-5));
    // eps sits within FD noise of 1, so the admissible range is either
    // unbounded (null) or astronomically large
    const auto& hi = j["result"]["alpha_admissible_high"];
    REQUIRE((hi.is_null() || hi.get<double>() > 1e6));
}
