#include "doctest.h"

#include "eop/cli.hpp"

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(std::vector<std::string> args) {
    args.insert(args.begin(), "eopctl");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = eop::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

nlohmann::json parse(const Result& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST_CASE("reps reproduces the two H1 families") {
    const auto r = call({"reps", "--case", "H1", "--m", "2", "--pmax", "50"});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    CHECK(j["schema_version"] == 1);
    const auto& s = j["reps"]["solutions"];
    REQUIRE(s.size() == 2);
    CHECK(s[0]["u"]["branch"] == "u1");
    CHECK(s[0]["p"] == "N");
    CHECK(s[0]["phi"]["text"] == "16 x (x + 2) (x + 3) (p + 1 - x)");
    CHECK(s[1]["u"]["branch"] == "u3");
    CHECK(s[1]["p"] == 0);
    CHECK(s[1]["E"]["value"] == "-4/1");
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
    const auto a = call({"reps", "--case", "H2", "--m1", "2", "--m2", "2"});
    const auto b = call({"reps", "--case", "H2", "--m1", "2", "--m2", "2", "--jobs", "3"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(call({"extend", "--case", "lag-ii", "--l", "5/2", "--m", "2"}).out ==
          call({"extend", "--case", "lag-ii", "--l", "5/2", "--m", "2"}).out);
}

TEST_CASE("extend prints the second-order denominator") {
    const auto r = call({"extend", "--case", "lag2", "--l", "2", "--m1", "0", "--m2", "0", "--format", "json"});
    REQUIRE(r.code == 0);
    const auto j = parse(r);
    CHECK(j["spec"]["denominator"]["coeffs"] == nlohmann::json::array({"-5/2", "-1/1"}));
    CHECK(j["spec"]["denominator"]["variable"] == "z");
}

TEST_CASE("numeric verification commands") {
    const auto r = call({"verify-spectrum", "--case", "hermite-ext", "--m", "2", "--k", "4"});
    REQUIRE(r.code == 0);
    CHECK(parse(r)["pass"] == true);
    CHECK(call({"verify-spectrum", "--case", "hermite-ext", "--m", "2", "--k", "4", "--points", "100", "--tol",
                "1e-9"})
              .code == 2);
    CHECK(call({"verify-ortho", "--case", "lag-i", "--l", "2", "--m", "1"}).code == 0);
    CHECK(call({"verify-algebra", "--case", "hermite-ext", "--m", "2"}).code == 0);
    CHECK(call({"verify-algebra", "--case", "H1", "--m", "2"}).code == 0);
    const auto eop = call({"eop", "--case", "hermite-ext", "--m", "2", "--max-degree", "6"});
    REQUIRE(eop.code == 0);
    CHECK(parse(eop)["polynomials"].size() == 5);
}

TEST_CASE("exit codes") {
    CHECK(call({"reps", "--case", "H1", "--m", "3"}).code == 1);
    CHECK(call({"extend", "--case", "lag-iii", "--l", "2", "--m", "1"}).code == 1);
    CHECK(call({"reps", "--case", "H9", "--m", "2"}).code == 64);
    CHECK(call({"reps", "--case", "H1"}).code == 64);
    CHECK(call({"reps", "--case", "H1", "--m", "2", "--l", "1"}).code == 64);
    CHECK(call({"reps", "--case", "H1", "--m", "2", "--bogus"}).code == 64);
    CHECK(call({"extend", "--case", "radial", "--l", "two"}).code == 64);
    CHECK(call({"extend", "--case", "oscillator", "--format", "yaml"}).code == 64);
    CHECK(call({}).code == 64);
    CHECK(call({"--help"}).code == 0);
    const auto bad = call({"extend", "--case", "lag-ii", "--l", "1/2", "--m", "3"});
    CHECK(bad.code == 1);
    CHECK(bad.err.find("alpha") != std::string::npos);
}

TEST_CASE("output directory from the environment") {
    const auto dir = std::filesystem::temp_directory_path() / "eopctl_cli_test";
    std::filesystem::remove_all(dir);
    ::setenv(eop::cli::kOutDirEnv, dir.c_str(), 1);
    const auto r = call({"export-potential", "--case", "oscillator", "--points", "16", "--out", "sub/v.csv"});
    ::unsetenv(eop::cli::kOutDirEnv);
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream f(dir / "sub" / "v.csv");
    std::string header;
    std::getline(f, header);
    CHECK(header == "x,V");
    std::filesystem::remove_all(dir);
}
