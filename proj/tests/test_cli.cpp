#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "hhv/cli.hpp"
#include "json.hpp"

using nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
    json doc() const { return json::parse(out); }
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = hhv::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string without_timings(const std::string& text) {
    json j = json::parse(text);
    j.erase("timings");
    return j.dump();
}

std::filesystem::path write_temp(const std::string& name, const std::string& body) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path;
}

}  // namespace

TEST(Cli, LogPhiConvexExpHolds) {
    const auto r = run({"check", "--class", "log-phi-convex", "--f", "exp(x)", "--phi", "x^2", "--a", "0", "--b", "1",
                        "--seed", "7"});
    EXPECT_EQ(r.code, 0) << r.out;
    const json j = r.doc();
    EXPECT_EQ(j["verdict"], "holds_on_samples");
    EXPECT_EQ(j["command"], "check");
    EXPECT_EQ(j["seed"], 7);
    EXPECT_LE(std::fabs(j["margins"]["min_margin"].get<double>()), 1e-12);
    for (const char* key : {"tool_version", "config_echo", "samples_tested", "timings"}) {
        EXPECT_TRUE(j.contains(key)) << key;
    }
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, Theorem2Chain) {
    const auto r =
        run({"chain", "--id", "theorem2", "--f", "exp(x)", "--g", "exp(x)", "--phi", "x", "--a", "0", "--b", "1"});
    EXPECT_EQ(r.code, 0) << r.out;
    const json j = r.doc();
    EXPECT_EQ(j["verdict"], "chain_holds");
    ASSERT_EQ(j["terms"].size(), 3u);
    for (const auto& t : j["terms"]) EXPECT_NEAR(t["value"].get<double>(), 3.19453, 1e-5);
}

TEST(Cli, SqrtIsNotConvex) {
    const auto r = run({"check", "--class", "convex", "--f", "sqrt(x)", "--a", "0", "--b", "1"});
    EXPECT_EQ(r.code, 1);
    const json j = r.doc();
    EXPECT_EQ(j["verdict"], "violated");
    ASSERT_TRUE(j.contains("witness"));
    EXPECT_LT(j["witness"]["margin"].get<double>(), -0.2);
}

TEST(Cli, UsageErrorsExitTwo) {
    const auto missing = run({"check", "--class", "convex"});
    EXPECT_EQ(missing.code, 2);
    EXPECT_EQ(missing.doc()["error"]["code"], "missing_argument");

    const auto parse_err = run({"check", "--f", "exp(x", "--a", "0", "--b", "1"});
    EXPECT_EQ(parse_err.code, 2);
    EXPECT_EQ(parse_err.doc()["error"]["code"], "parse_error");
    EXPECT_EQ(parse_err.doc()["error"]["offset"], 5);

    EXPECT_EQ(run({"check", "--f", "x", "--a", "1", "--b", "0"}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"check", "--f", "x", "--class", "wobbly"}).code, 2);
    EXPECT_EQ(run({"check", "--f", "x", "--grid-t", "4"}).code, 2);
    EXPECT_EQ(run({"search", "--budget", "0"}).code, 2);
    EXPECT_EQ(run({"chain", "--id", "theorem2", "--f", "exp(x)"}).code, 2);
    EXPECT_EQ(run({"check", "--class", "phi-convex", "--f", "x", "--phi", "2*x"}).code, 3);
}

TEST(Cli, NumericErrorsExitThree) {
    const auto r = run({"chain", "--id", "classic-hh", "--f", "ln(x)", "--a", "0", "--b", "1"});
    EXPECT_EQ(r.code, 3);
    const json j = r.doc();
    EXPECT_EQ(j["verdict"], "error");
    EXPECT_EQ(j["error"]["code"], "domain_error");
    EXPECT_EQ(j["error"]["abscissa"], 0.0);

    EXPECT_EQ(run({"check", "--class", "log-convex", "--f", "x", "--a", "-1", "--b", "1"}).code, 3);
    EXPECT_EQ(run({"chain", "--id", "theorem1", "--f", "exp(x)", "--phi", "0.5"}).code, 3);
}

TEST(Cli, HelpAndVersion) {
    EXPECT_EQ(run({"--help"}).code, 0);
    const auto v = run({"--version"});
    EXPECT_EQ(v.code, 0);
    EXPECT_NE(v.out.find(hhv::cli::tool_version()), std::string::npos);
}

TEST(Cli, ConfigFileMergesUnderFlags) {
    const auto path = write_temp("hhv_cli_config.json",
                                 R"json({"command": "check", "class": "convex", "f": "sqrt(x)", "grid-x": 9,
                                     "samples": 10, "seed": 3})json");
    const auto from_file = run({"--config", path.string()});
    EXPECT_EQ(from_file.code, 1);
    EXPECT_EQ(from_file.doc()["config_echo"]["grid_x"], 9);
    EXPECT_EQ(from_file.doc()["seed"], 3);

    const auto overridden = run({"check", "--config", path.string(), "--f", "x^2"});
    EXPECT_EQ(overridden.code, 0);
    EXPECT_EQ(overridden.doc()["config_echo"]["f"], "x^2");

    EXPECT_EQ(run({"--config", "/nonexistent/hhv.json"}).code, 2);
    const auto bad = write_temp("hhv_cli_bad.json", "[1, 2]");
    EXPECT_EQ(run({"check", "--config", bad.string()}).code, 2);
    std::filesystem::remove(path);
    std::filesystem::remove(bad);
}

TEST(Cli, SeedFromEnvironment) {
    ::setenv("HHV_SEED", "41", 1);
    const auto r = run({"check", "--f", "exp(x)", "--class", "log-convex", "--grid-x", "5", "--samples", "20"});
    EXPECT_EQ(r.doc()["seed"], 41);
    const auto flag = run({"check", "--f", "exp(x)", "--seed", "2", "--grid-x", "5", "--samples", "20"});
    EXPECT_EQ(flag.doc()["seed"], 2);
    ::setenv("HHV_SEED", "nope", 1);
    EXPECT_EQ(run({"check", "--f", "exp(x)"}).code, 2);
    ::unsetenv("HHV_SEED");
}

TEST(Cli, Determinism) {
    const std::vector<std::vector<std::string>> commands{
        {"check", "--class", "log-phi-convex", "--f", "exp(x^2)", "--phi", "x^3", "--a", "-1", "--b", "1", "--seed",
         "5"},
        {"check", "--class", "lemma-z", "--f", "exp(x^2)", "--phi", "x^2", "--seed", "5", "--grid-x", "9"},
        {"search", "--target", "log-convex", "--family", "positive-poly", "--seed", "11", "--budget", "20"},
        {"report", "--f", "exp(x)", "--grid-x", "9", "--samples", "100"},
    };
    for (const auto& args : commands) {
        const auto first = run(args);
        const auto second = run(args);
        EXPECT_EQ(first.code, second.code);
        EXPECT_EQ(without_timings(first.out), without_timings(second.out)) << args[0];
    }
}

TEST(Cli, CsvAndHumanFormats) {
    const auto csv = run({"chain", "--id", "classic-hh", "--f", "exp(x)", "--format", "csv"});
    EXPECT_EQ(csv.code, 0);
    EXPECT_EQ(csv.out.rfind("index,name,value,margin_to_next\n", 0), 0u) << csv.out;
    EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 4);

    const auto human = run({"chain", "--id", "classic-hh", "--f", "exp(x)", "--format", "human"});
    EXPECT_NE(human.out.find("f_midpoint"), std::string::npos);
    EXPECT_TRUE(human.err.empty());

    EXPECT_EQ(run({"chain", "--f", "exp(x)", "--format", "yaml"}).code, 2);
}

TEST(Cli, OtherCheckClasses) {
    const auto impl = run({"check", "--class", "implication", "--f", "x", "--a", "1", "--b", "2"});
    EXPECT_EQ(impl.code, 1);
    EXPECT_EQ(impl.doc()["details"]["links"].size(), 3u);

    const auto lemma = run({"check", "--class", "lemma-l", "--f", "x^2", "--phi", "sqrt(x)", "--pairs", "4"});
    EXPECT_EQ(lemma.code, 0);
    EXPECT_EQ(lemma.doc()["verdict"], "equivalence_agrees");
}

TEST(Cli, SearchAndReport) {
    const auto found = run({"search", "--target", "log-convex", "--family", "positive-poly", "--budget", "100"});
    EXPECT_EQ(found.code, 1);
    EXPECT_EQ(found.doc()["verdict"], "found");
    EXPECT_TRUE(found.doc()["details"]["reverified"].get<bool>());

    const auto none = run({"search", "--target", "classic-hh", "--family", "exp-of-poly", "--budget", "5"});
    EXPECT_EQ(none.code, 0);
    EXPECT_EQ(none.doc()["verdict"], "not_found");

    const auto report = run({"report", "--f", "exp(x)", "--g", "exp(2*x)", "--phi", "x^2"});
    EXPECT_EQ(report.code, 0) << report.out;
    EXPECT_EQ(report.doc()["verdict"], "all_hold");
}
