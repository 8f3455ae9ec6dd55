// Copyright 2026 The dickevqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "run_config.hpp"

namespace dickevqe::cli {
namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run_cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
   protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("dickevqe_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string &name, const std::string &text) {
        fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p;
    }
    std::string out(const std::string &sub) const { return (dir_ / sub).string(); }

    fs::path dir_;
};

std::string config(const std::string &name) { return std::string(DICKEVQE_CONFIG_DIR) + "/" + name; }

TEST(RunConfig, DefaultsResolve) {
    RunConfig c = parse_run_config("{}", "x.json");
    EXPECT_EQ(c.mode, "soft");
    EXPECT_EQ(c.schedule.counts.size(), 8u);
    EXPECT_EQ(c.alphas().size(), 8u);
    nlohmann::json j = c.resolved();
    EXPECT_EQ(j["problem"]["kind"], "synthetic");
}

TEST(RunConfig, ErrorsNameFileLineAndKey) {
    auto message = [](const std::string &text) {
        try {
            parse_run_config(text, "cfg.json");
        } catch (const ConfigError &e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_EQ(message("{\n  \"mode\": \"hard\",\n  \"depth\": \"two\"\n}"), "cfg.json:3: 'depth': expected an integer");
    EXPECT_NE(message("{\n \"bogus\": 1\n}").find("cfg.json:2: 'bogus'"), std::string::npos);
    EXPECT_NE(message("{\"mode\": \"medium\"}").find("'mode'"), std::string::npos);
    EXPECT_NE(message("{\n\"schedule\": {\"counts\": [1, 1], \"epochs\": [3], \"rho_pi\": [0.1, 0.1]}\n}").find(
                  "cfg.json:2"),
              std::string::npos);
    EXPECT_NE(message("{\n  \"mode\": \"soft\",\n  oops\n}").find("cfg.json:3"), std::string::npos);
    EXPECT_NE(message("{\"mode\": \"hard\", \"depth\": 0}").find("'depth'"), std::string::npos);
}

TEST_F(CliTest, ConfigErrorExitsWithOne) {
    fs::path bad = write("bad.json", "{\n  \"problem\": {\"n\": -4}\n}\n");
    Outcome o = run_cli({"solve", "--config", bad.string(), "--out", out("o")});
    EXPECT_EQ(o.code, kConfigError);
    EXPECT_NE(o.err.find("bad.json:2"), std::string::npos) << o.err;
}

TEST_F(CliTest, UnknownSubcommandFails) {
    EXPECT_NE(run_cli({"frobnicate"}).code, 0);
}

TEST_F(CliTest, BundledPortfolioSolveMatchesBruteForce) {
    Outcome s = run_cli({"solve", "--config", config("portfolio_d12_soft.json"), "--out", out("s")});
    ASSERT_EQ(s.code, kOk) << s.err;
    Outcome b = run_cli({"bruteforce", "--config", config("portfolio_d12_soft.json"), "--out", out("b")});
    ASSERT_EQ(b.code, kOk) << b.err;
    auto sol = nlohmann::json::parse(slurp(dir_ / "s" / "solution.json"));
    auto bf = nlohmann::json::parse(slurp(dir_ / "b" / "bruteforce.json"));
    EXPECT_EQ(sol["solution"]["bits"], bf["solution"]["bits"]);
    EXPECT_EQ(sol["solution"]["optimal"], true);
    EXPECT_TRUE(fs::exists(dir_ / "s" / "locate.json"));
    std::string trace = slurp(dir_ / "s" / "trace.csv");
    EXPECT_EQ(trace.rfind("# dickevqe ", 0), 0u);
    EXPECT_NE(trace.find("\n# config: {"), std::string::npos);
}

TEST_F(CliTest, BisectionSolveKeepsTopBit) {
    Outcome s = run_cli({"solve", "--config", config("bisection_d12_soft.json"), "--out", out("g")});
    ASSERT_EQ(s.code, kOk) << s.err;
    auto sol = nlohmann::json::parse(slurp(dir_ / "g" / "solution.json"));
    std::string bits = sol["solution"]["bits"];
    ASSERT_EQ(bits.size(), 12u);
    EXPECT_EQ(bits[0], '1');
    EXPECT_EQ(std::count(bits.begin(), bits.end(), '1'), 6);
    EXPECT_EQ(sol["solution"]["optimal"], true);
}

TEST_F(CliTest, SolveIsByteIdentical) {
    for (const char *name : {"a", "b"}) {
        Outcome o = run_cli({"solve", "--config", config("portfolio_d12_soft.json"), "--out", out(name), "--seed",
                             "17", "--dump-circuit"});
        ASSERT_EQ(o.code, kOk) << o.err;
    }
    for (const char *f : {"solution.json", "locate.json", "trace.csv", "circuit.txt"}) {
        EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
    }
}

TEST_F(CliTest, SeedOverrideChangesTrace) {
    run_cli({"solve", "--out", out("a"), "--seed", "1"});
    run_cli({"solve", "--out", out("b"), "--seed", "2"});
    EXPECT_NE(slurp(dir_ / "a" / "trace.csv"), slurp(dir_ / "b" / "trace.csv"));
}

TEST_F(CliTest, CurvesHaveEightRatioColumns) {
    Outcome o = run_cli({"curves", "--config", config("curves_d18.json"), "--out", out("c")});
    ASSERT_EQ(o.code, kOk) << o.err;
    std::istringstream in(slurp(dir_ / "c" / "curves.csv"));
    std::string line;
    std::vector<std::string> rows;
    while (std::getline(in, line)) {
        if (line.rfind("#", 0) != 0) rows.push_back(line);
    }
    ASSERT_EQ(rows.size(), 22u);
    EXPECT_EQ(std::count(rows[0].begin(), rows[0].end(), ','), 16);
    EXPECT_EQ(rows[0].substr(0, 17), "theta_pi,ratio_1,");
}

TEST_F(CliTest, InterpolateReturnOnlyPolylineEndsRight) {
    fs::path cfg = write("mu.json", R"({"problem": {"n": 12, "seed": 31, "cost_mode": "return"}})");
    Outcome o = run_cli({"interpolate", "--config", cfg.string(), "--out", out("i")});
    ASSERT_EQ(o.code, kOk) << o.err;
    std::istringstream in(slurp(dir_ / "i" / "interpolate.csv"));
    std::string line;
    int best_index = -1;
    double best = INFINITY;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line[0] == 'i') continue;
        std::istringstream row(line);
        std::string idx, val;
        std::getline(row, idx, ',');
        std::getline(row, val, ',');
        if (std::stod(val) < best) {
            best = std::stod(val);
            best_index = std::stoi(idx);
        }
    }
    EXPECT_EQ(best_index, 6);
    EXPECT_TRUE(fs::exists(dir_ / "i" / "curve.json"));
}

TEST_F(CliTest, InterpolateWarnsWhenCapped) {
    fs::path cfg = write("cap.json", R"({"problem": {"n": 12}, "cell_cap": 50})");
    Outcome o = run_cli({"interpolate", "--config", cfg.string(), "--out", out("i")});
    EXPECT_EQ(o.code, kOk);
    EXPECT_NE(o.err.find("warning"), std::string::npos);
}

TEST_F(CliTest, CappedCellsExitWithTwo) {
    fs::path cfg = write("cap.json", R"({"problem": {"n": 16}, "mode": "hard", "depth": 2, "cell_cap": 20,
                                         "theta_init_pi": 0.8})");
    Outcome o = run_cli({"solve", "--config", cfg.string(), "--out", out("s")});
    EXPECT_EQ(o.code, kApproximate) << o.err;
    auto sol = nlohmann::json::parse(slurp(dir_ / "s" / "solution.json"));
    EXPECT_EQ(sol["flags"]["approximate"], true);
    EXPECT_EQ(sol["exit_status"], 2);
}

TEST_F(CliTest, GeneratedPricesFeedTheCsvSource) {
    fs::path gen = write("gen.json", R"({"problem": {"kind": "synthetic", "n": 8, "seed": 5}})");
    ASSERT_EQ(run_cli({"gen-data", "--config", gen.string(), "--out", out("d")}).code, kOk);
    ASSERT_TRUE(fs::exists(dir_ / "d" / "prices.csv"));
    fs::path csv = write("csv.json", R"({"problem": {"kind": "csv", "path": ")" + (dir_ / "d" / "prices.csv").string() +
                                         R"(", "n": 8}})");
    Outcome o = run_cli({"bruteforce", "--config", csv.string(), "--out", out("b")});
    ASSERT_EQ(o.code, kOk) << o.err;
    fs::path snap = write("snap.json", R"({"problem": {"kind": "snapshot", "path": ")" +
                                           (dir_ / "d" / "problem.json").string() + R"(", "n": 8}})");
    Outcome s = run_cli({"bruteforce", "--config", snap.string(), "--out", out("c")});
    ASSERT_EQ(s.code, kOk) << s.err;
    EXPECT_EQ(nlohmann::json::parse(slurp(dir_ / "b" / "bruteforce.json"))["solution"]["energy"],
              nlohmann::json::parse(slurp(dir_ / "c" / "bruteforce.json"))["solution"]["energy"]);
}

TEST_F(CliTest, GraphGeneration) {
    fs::path gen = write("g.json", R"({"problem": {"kind": "graph", "n": 12, "offset": -20}})");
    Outcome o = run_cli({"gen-data", "--config", gen.string(), "--out", out("g")});
    ASSERT_EQ(o.code, kOk) << o.err;
    EXPECT_EQ(slurp(dir_ / "g" / "graph.txt").rfind("n 12 offset -20", 0), 0u);
}

TEST_F(CliTest, SmallStudyWritesBothTables) {
    fs::path cfg = write("st.json", R"({"study": {"n": 6, "alphas": [0.1], "seeds": 2, "shots": 64, "epochs": 10}})");
    Outcome o = run_cli({"study", "--config", cfg.string(), "--out", out("st"), "--jobs", "2"});
    ASSERT_EQ(o.code, kOk) << o.err;
    EXPECT_TRUE(fs::exists(dir_ / "st" / "study_summary.csv"));
    EXPECT_TRUE(fs::exists(dir_ / "st" / "study_traces.csv"));
}

}  // namespace
}  // namespace dickevqe::cli
