#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "monospde_cli/runner.hpp"

namespace fs = std::filesystem;
using monospde::cli::run;

namespace {

const std::string kScenarios = MONOSPDE_SCENARIO_DIR;

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "monospde");
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("monospde-test-" + name);
    fs::remove_all(p);
    return p;
}

std::string write_config(const fs::path& dir, const std::string& text) {
    fs::create_directories(dir);
    const fs::path p = dir / "config.json";
    std::ofstream(p) << text;
    return p.string();
}

std::vector<fs::path> files_with_prefix(const fs::path& dir, const std::string& prefix) {
    std::vector<fs::path> out;
    if (!fs::exists(dir)) return out;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().filename().string().rfind(prefix, 0) == 0) out.push_back(e.path());
    return out;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST(Cli, CheckAssumptionsOnGinzburgLandau) {
    const fs::path out = fresh_dir("check");
    const Result r = invoke({"check-assumptions", "--config", kScenarios + "/gl_moment.json", "--out", out.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(files_with_prefix(out, "check-assumptions-").size(), 1u);
}

TEST(Cli, VerifyMomentOnZeroDataPasses) {
    const fs::path out = fresh_dir("zero");
    const Result r = invoke({"verify-moment", "--config", kScenarios + "/zero_data.json", "--out", out.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto json_files = files_with_prefix(out, "verify-moment-");
    ASSERT_EQ(json_files.size(), 2u);  // .json and .csv
    for (const auto& f : json_files)
        if (f.extension() == ".json") {
            EXPECT_NE(slurp(f).find("\"n_emp\": null"), std::string::npos);
        }
}

TEST(Cli, DtAboveFinalTimeExitsTwo) {
    const fs::path dir = fresh_dir("dt");
    const std::string cfg = write_config(dir, R"({"solver": {"T": 0.1, "dt": 0.5}})");
    EXPECT_EQ(invoke({"verify-moment", "--config", cfg, "--out", dir.string()}).code, 2);
}

TEST(Cli, UnknownKeysExitTwoAndAreListed) {
    const fs::path dir = fresh_dir("unknown");
    const std::string cfg = write_config(dir, R"({"solver": {"dtt": 0.5}, "colour": 1})");
    const Result r = invoke({"simulate", "--config", cfg, "--out", dir.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("solver.dtt"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("colour"), std::string::npos) << r.err;
}

TEST(Cli, UsageErrorsExitTwo) {
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"verify-moment"}).code, 2);
    EXPECT_EQ(invoke({"frobnicate", "--config", "x"}).code, 2);
    EXPECT_EQ(invoke({"verify-moment", "--config", "/nonexistent/config.json"}).code, 2);
}

TEST(Cli, BlowUpExitsThree) {
    const fs::path dir = fresh_dir("blowup");
    const std::string cfg = write_config(
        dir, R"({"semilinear": {"preset": "zero"}, "modes": 0, "solver": {"scheme": "explicit", "T": 1.0, "dt": 0.01}, "samples": 1})");
    EXPECT_EQ(invoke({"simulate", "--config", cfg, "--out", dir.string()}).code, 3);
}

TEST(Cli, SimulateWritesTrajectoryDumps) {
    const fs::path dir = fresh_dir("simulate");
    const std::string cfg = write_config(
        dir, R"({"domain": {"points": [16]}, "modes": 2, "solver": {"T": 0.01, "dt": 0.001},
                 "output": {"trajectory_dump": "binary", "dump_count": 2}, "samples": 3})");
    const Result r = invoke({"simulate", "--config", cfg, "--out", dir.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    const auto dumps = files_with_prefix(dir, "trajectory-");
    ASSERT_EQ(dumps.size(), 2u);
    const std::string bytes = slurp(dumps[0]);
    EXPECT_EQ(bytes.substr(0, 4), "MSPD");
    // header 4 + 5 * 4 + 8 bytes, then 11 snapshots of (t + 16 values)
    EXPECT_EQ(bytes.size(), 32u + 11u * 17u * 8u);

    const Result csv = invoke({"simulate", "--config", cfg, "--out", dir.string(), "--set",
                               "output.trajectory_dump=\"csv\"", "--set", "output.dump_count=1"});
    EXPECT_EQ(csv.code, 0) << csv.err;
    bool found = false;
    for (const auto& f : files_with_prefix(dir, "trajectory-"))
        if (f.extension() == ".csv") {
            found = true;
            std::ifstream in(f);
            std::string header;
            std::getline(in, header);
            EXPECT_EQ(header, "t,node,x,u");
        }
    EXPECT_TRUE(found);
}

TEST(Cli, SweepOverTruncationLevelsWritesOneRowPerValue) {
    const fs::path dir = fresh_dir("sweep");
    const Result r = invoke({"sweep", "--config", kScenarios + "/zero_data.json", "--out", dir.string(),
                             "--subcommand", "verify-moment", "--axis", "solver.truncation", "--values",
                             "1,2,4,8,16"});
    EXPECT_EQ(r.code, 0) << r.err;
    for (const auto& f : files_with_prefix(dir, "sweep-verify-moment-"))
        if (f.extension() == ".csv") {
            std::ifstream in(f);
            std::string line;
            int rows = -1;  // header
            while (std::getline(in, line)) ++rows;
            EXPECT_EQ(rows, 5);
        }
}

TEST(Cli, SweepRejectsNonEstimateSubcommand) {
    EXPECT_EQ(invoke({"sweep", "--config", kScenarios + "/zero_data.json", "--subcommand", "simulate", "--axis",
                      "seed", "--values", "1"})
                  .code,
              2);
}

TEST(Cli, StrictRerunIsByteIdentical) {
    const fs::path a = fresh_dir("det-a"), b = fresh_dir("det-b");
    const std::vector<std::string> common{"--config", kScenarios + "/zero_data.json", "--strict-fp", "--samples", "3",
                                          "--set", "initial.preset=\"sine\"", "--set", "initial.amplitude=1"};
    auto args_a = common, args_b = common;
    args_a.insert(args_a.begin(), {"verify-moment", "--out", a.string()});
    args_b.insert(args_b.begin(), {"verify-moment", "--out", b.string(), "--workers", "3"});
    ASSERT_EQ(invoke(args_a).code, 0);
    ASSERT_EQ(invoke(args_b).code, 0);
    const auto fa = files_with_prefix(a, "verify-moment-"), fb = files_with_prefix(b, "verify-moment-");
    ASSERT_EQ(fa.size(), 2u);
    for (const auto& f : fa) EXPECT_EQ(slurp(f), slurp(b / f.filename())) << f;
}
