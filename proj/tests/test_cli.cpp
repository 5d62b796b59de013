#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dirac2d/cli.hpp"
#include "dirac2d/config_io.hpp"
#include "dirac2d/error.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace dirac2d;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    args.insert(args.begin(), "dirac2d");
    std::vector<const char*> argv;
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / ("dirac2d_test_" + name);
    std::ofstream(path) << text;
    return path.string();
}

const std::string deep_well_json = R"({"kind":"config2","m":1,"e":1,"V0":-5,"S0":0,"a":1,"c":2})";

std::size_t data_lines(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        n += !line.empty() && line[0] != '#';
    }
    return n;
}

} // namespace

TEST_CASE("config round trip") {
    RunConfig rc;
    rc.potential.kind = ConfigKind::Config2;
    rc.potential.V0 = -1.25;
    rc.potential.S0 = 0.1 + 0.2;
    rc.potential.a = 1;
    rc.potential.c = 2.5;
    rc.potential.w_theta = AngularProfile::tabulated({0.1, 0.3, -0.2, 0.1});
    rc.phys.e = -1.0 / 3.0;
    rc.phys.Z = 0.7;
    const std::string text = emit_config(rc);
    const RunConfig back = parse_config(text);
    CHECK(back == rc);
    CHECK(emit_config(back) == text);
    CHECK(parse_config(R"({"kind":"config1"})") == RunConfig{});
}

TEST_CASE("strict config reader") {
    auto kind = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::NonConvergent;
    };
    CHECK(kind(R"({"kind":"config1","V1":2})") == ErrorKind::InvalidConfig);
    CHECK(kind(R"({"V0":2})") == ErrorKind::InvalidConfig);
    CHECK(kind(R"({"kind":"config3"})") == ErrorKind::InvalidConfig);
    CHECK(kind(R"({"kind":"config1","m":"1"})") == ErrorKind::InvalidConfig);
    CHECK(kind(R"({"kind":"config1","a":2,"b":1})") == ErrorKind::InvalidConfig);
    CHECK(kind(R"({"kind":"config2","Wtheta":{"kind":"tabulated","samples":[1,2,3]}})") == ErrorKind::InvalidConfig);
    CHECK(kind(R"({"kind":"config2","Wtheta":{"kind":"constant","w0":1,"extra":0}})") == ErrorKind::InvalidConfig);
    CHECK(kind("{bad") == ErrorKind::InvalidConfig);
    CHECK(parse_config(R"({"kind":"config2","Wtheta":{"kind":"constant","w0":0.25}})").potential.w_theta.w0 == 0.25);
}

TEST_CASE("classify") {
    const auto dot = write_temp("dot.json", R"({"kind":"config1","V0":0,"W0":0,"S0":0})");
    const auto r = run({"classify", "--config", dot, "--eps", "0.5"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["region"] == "I");
    CHECK(j["table"] == "T1_Spos");
    CHECK(j["shells"].size() == 4);
    CHECK(j["manifest"]["subcommand"] == "classify");

    const auto scan = run({"classify", "--scan", "-3:3:601"});
    REQUIRE(scan.code == 0);
    CHECK(data_lines(scan.out) == 602); // header plus rows
    const auto grid = run({"classify", "--scan", "-3:3:11,-2:2:5", "--format", "csv"});
    CHECK(data_lines(grid.out) == 56);

    const auto bad = write_temp("bad.json", "{bad");
    CHECK(run({"classify", "--config", bad, "--eps", "0"}).code == 2);
    CHECK(run({"classify", "--config", "/nonexistent/x.json", "--eps", "0"}).code == 2);
    const auto uncovered = write_temp("unc.json", R"({"kind":"config1","S0":-1.5})");
    CHECK(run({"classify", "--config", uncovered, "--eps", "0.1"}).code == 3);
    const auto missing = write_temp("missing.json", R"({"kind":"config1","W0":1,"S0":-0.5})");
    CHECK(run({"classify", "--config", missing, "--eps", "0.7"}).code == 3);
    CHECK(run({"classify"}).code == 2);
}

TEST_CASE("spectrum") {
    const auto empty = write_temp("empty.json", R"({"kind":"config2","a":1,"c":2})");
    const auto e = run({"spectrum", "--config", empty});
    REQUIRE(e.code == 0);
    CHECK(nlohmann::json::parse(e.out)["states"].empty());

    const auto well = write_temp("well.json", deep_well_json);
    const auto r = run({"spectrum", "--config", well, "--k", "1"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    REQUIRE(j["states"].size() == 1);
    CHECK(std::abs(j["states"][0]["energy"].get<double>() - 0.050697776284) < 1e-6);
    CHECK(j["states"][0]["k"] == 1);
    CHECK(j["states"][0]["region"] == "IV");

    CHECK(run({"spectrum", "--config", well, "--window", "-2:0"}).code == 4);
    CHECK(run({"spectrum", "--config", well, "--window", "0.5:1.5"}).code == 4);
    CHECK(run({"spectrum", "--config", well, "--k", "2"}).code == 2);

    const auto csv = run({"spectrum", "--config", well, "--k", "1,-1", "--format", "csv"});
    REQUIRE(csv.code == 0);
    CHECK(csv.out.find("0.050697776") != std::string::npos);
    CHECK(data_lines(csv.out) == 3);
}

TEST_CASE("wavefunction csv") {
    const auto well = write_temp("well.json", deep_well_json);
    const auto r = run({"wavefunction", "--config", well, "--nr", "4", "--ntheta", "3"});
    REQUIRE(r.code == 0);
    CHECK(data_lines(r.out) == 13);
    CHECK(r.out.find("r,theta,RePsi+,ImPsi+,RePsi-,ImPsi-") != std::string::npos);
    CHECK(run({"wavefunction", "--config", well, "--state", "3"}).code == 5);
}

TEST_CASE("coulomb") {
    const auto c0 = write_temp("c0.json", R"({"kind":"coulomb","Z":0})");
    auto j = nlohmann::json::parse(run({"coulomb", "--config", c0}).out);
    CHECK(j["lambda"] == 0.25);
    CHECK(j["supercritical"] == false);
    CHECK(std::abs(j["critical_coupling"].get<double>() - 0.70710678118654757) < 1e-15);
    CHECK(j["quoted_critical_charge"] == 0.5);
    const auto below = write_temp("c1.json", R"({"kind":"coulomb","Z":0.7071067})");
    const auto above = write_temp("c2.json", R"({"kind":"coulomb","Z":0.7071068,"B":3})");
    CHECK(nlohmann::json::parse(run({"coulomb", "--config", below}).out)["supercritical"] == false);
    CHECK(nlohmann::json::parse(run({"coulomb", "--config", above}).out)["supercritical"] == true);
    const auto md = run({"coulomb", "--config", c0, "--format", "md"});
    CHECK(md.out.find("K_c = 1/2") != std::string::npos);
    CHECK(run({"coulomb", "--config", write_temp("w.json", deep_well_json)}).code == 2);
}

TEST_CASE("summary tables") {
    const auto a = run({"summary-tables"});
    REQUIRE(a.code == 0);
    CHECK(a.out.find("gamma^2 = (m+S)^2 + e^2 W^2 - (E-eV)^2") != std::string::npos);
    CHECK(a.out.find("rho^2 = (m+2S+E)(E-m)") != std::string::npos);
    CHECK(a.out.find("mismatch") == std::string::npos);
    CHECK(run({"summary-tables"}).out == a.out);
}

TEST_CASE("hidden subcommands") {
    const auto s = run({"specfun-eval", "--function", "bessel_J", "--params", "0.3", "--z", "2"});
    REQUIRE(s.code == 0);
    const auto j = nlohmann::json::parse(s.out);
    CHECK(std::abs(j["value"][0].get<double>() - 0.42569406198141372) < 1e-14);
    const auto o = run({"oracle", "--function", "whittaker_M", "--params", "-0.4,0.9", "--z", "0.5", "--z1", "5", "--n", "4"});
    REQUIRE(o.code == 0);
    CHECK(data_lines(o.out) == 5);
    const auto well = write_temp("well.json", deep_well_json);
    const auto ode = run({"oracle", "--config", well, "--energy", "0.3", "--r0", "0.1", "--r1", "0.9", "--n", "5"});
    REQUIRE(ode.code == 0);
    CHECK(data_lines(ode.out) == 5);
    CHECK(run({"oracle", "--config", well, "--energy", "0.3", "--r0", "0.5", "--r1", "1.5"}).code == 2);
    CHECK(run({"summary-tables", "--help"}).code == 0);
    CHECK(run({"frobnicate"}).code == 2);
    const auto help = run({"--help"});
    CHECK(help.code == 0);
    CHECK(help.out.find("Exit codes") != std::string::npos);
    CHECK(help.out.find("specfun-eval") == std::string::npos);
}

TEST_CASE("identical manifests give identical bytes") {
    setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
    const auto well = write_temp("well.json", deep_well_json);
    setenv("DIRAC2D_THREADS", "1", 1);
    const auto a = run({"spectrum", "--config", well, "--k", "-1,1,3", "--format", "csv"});
    setenv("DIRAC2D_THREADS", "4", 1);
    const auto b = run({"spectrum", "--config", well, "--k", "3,1,-1", "--format", "csv"});
    unsetenv("DIRAC2D_THREADS");
    REQUIRE(a.code == 0);
    // the argument string is part of the manifest; the payload below it must match
    CHECK(a.out.substr(a.out.find("\nk,")) == b.out.substr(b.out.find("\nk,")));
    const auto c = run({"spectrum", "--config", well, "--k", "-1,1,3", "--format", "csv"});
    CHECK(a.out == c.out);
    CHECK(a.out.find("timestamp=1700000000") != std::string::npos);
    const auto out = (std::filesystem::temp_directory_path() / "dirac2d_test_out.csv").string();
    CHECK(run({"spectrum", "--config", well, "--k", "-1,1,3", "--format", "csv", "--out", out}).code == 0);
    std::ifstream f(out);
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str() == a.out);
}
