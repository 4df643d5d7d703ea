/*
   Copyright 2026 The lppsim Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"

namespace {

namespace fs = std::filesystem;

struct Result {
    int status = -1;
    std::string out;  // stdout and stderr together
};

Result run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(LPPSIM_PATH) + " " + args + " 2>&1";
    Result r;
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) r.out.append(buf, n);
    const int st = ::pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("lppsim_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string at(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

TEST_F(Cli, OracleCheck) {
    const Result ok = run("oracle-check --max-size 6 --cases 100 --seed 1");
    EXPECT_EQ(ok.status, 0) << ok.out;
    EXPECT_NE(ok.out.find("0 mismatches"), std::string::npos);
    const Result big = run("oracle-check --max-size 9");
    EXPECT_EQ(big.status, 2) << big.out;
    const Result none = run("oracle-check --cases 0");
    EXPECT_EQ(none.status, 0);
    EXPECT_NE(none.out.find("warning"), std::string::npos);
}

TEST_F(Cli, UsageErrors) {
    const Result r = run("tail --k 8 --n 64 --R 16 --out " + at("t.csv"));
    EXPECT_EQ(r.status, 2);
    EXPECT_NE(r.out.find("requires n > Rk"), std::string::npos) << r.out;
    EXPECT_FALSE(fs::exists(at("t.csv")));
    EXPECT_EQ(run("tail --R 4,x").status, 2);
    EXPECT_NE(run("tail --bogus 1").status, 0);
    EXPECT_NE(run("").status, 0);
    EXPECT_EQ(run("reduction-ratio --R 10 --out " + at("r.csv")).status, 2);
    EXPECT_EQ(run("onepoint --m 4 --n 8 --out " + at("o.csv")).status, 2);
}

TEST_F(Cli, UnwritableOutput) {
    const Result r = run("tail --k 2 --n 40 --R 2,4 --trials 10 --out " + at("missing/dir/t.csv"));
    EXPECT_EQ(r.status, 3) << r.out;
}

TEST_F(Cli, TailWritesCsvAndJson) {
    const Result r =
        run("tail --k 2 --n 48 --R 2,4,8 --trials 300 --seed 3 --workers 2 --out " + at("t.csv"));
    ASSERT_EQ(r.status, 0) << r.out;
    const std::string csv = slurp(at("t.csv"));
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
    const auto j = nlohmann::json::parse(slurp(at("t.json")));
    EXPECT_TRUE(j["results"]["fit"].contains("fitted_slope"));
    EXPECT_EQ(j["metadata"]["workers"], 2);
    EXPECT_EQ(j["config"]["n"], 48);
    EXPECT_EQ(j["rows"].size(), 3u);
}

TEST_F(Cli, DeterministicAcrossWorkers) {
    const std::string common = "tail --k 2 --n 48 --R 2,4,8 --trials 400 --seed 9 --no-timing --batch 33 ";
    ASSERT_EQ(run(common + "--workers 1 --out " + at("a.csv")).status, 0);
    ASSERT_EQ(run(common + "--workers 8 --out " + at("b.csv")).status, 0);
    EXPECT_EQ(slurp(at("a.csv")), slurp(at("b.csv")));
}

TEST_F(Cli, ConfigFilePrecedence) {
    std::ofstream(at("c.txt")) << "# defaults for a quick run\nk = 2\nn=48\nR=2,4,8\ntrials=50\nseed=4\n";
    ASSERT_EQ(run("--config " + at("c.txt") + " tail --trials 70 --out " + at("t.csv")).status, 0);
    const auto j = nlohmann::json::parse(slurp(at("t.json")));
    EXPECT_EQ(j["config"]["k"], 2);
    EXPECT_EQ(j["config"]["trials"], 70);
    EXPECT_EQ(j["config"]["seed"], 4);
    std::ofstream(at("bad.txt")) << "no equals sign\n";
    EXPECT_EQ(run("--config " + at("bad.txt") + " tail").status, 2);
    EXPECT_EQ(run("--config " + at("absent.txt") + " tail").status, 3);
}

TEST_F(Cli, WorkersFromEnvironment) {
    ASSERT_EQ(run("onepoint --m 4 --n 4 --trials 20 --out " + at("o.csv"), "LPP_WORKERS=3").status, 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(at("o.json")))["metadata"]["workers"], 3);
    ASSERT_EQ(run("onepoint --m 4 --n 4 --trials 20 --workers 2 --out " + at("o.csv"), "LPP_WORKERS=3").status, 0);
    EXPECT_EQ(nlohmann::json::parse(slurp(at("o.json")))["metadata"]["workers"], 2);
}

TEST_F(Cli, FitExactPowerLaw) {
    std::ofstream(at("p.csv")) << "experiment,k,n,R,m,r,s,x,trials,successes,p_hat,ci_lo,ci_hi,seed,wall_time_s\n"
                                  "tail,8,1024,1,,,,,1,1,1,1,1,1,\n"
                                  "tail,8,1024,10,,,,,1,1,0.21544,0,1,1,\n"
                                  "tail,8,1024,100,,,,,1,1,0.046416,0,1,1,\n";
    const Result r = run("fit --in " + at("p.csv") + " --out " + at("fit.json"));
    ASSERT_EQ(r.status, 0) << r.out;
    const auto j = nlohmann::json::parse(slurp(at("fit.json")));
    EXPECT_NEAR(j["fit"]["fitted_slope"].get<double>(), -2.0 / 3.0, 1e-4);
    std::ofstream(at("q.csv")) << "experiment,k\n";
    EXPECT_NE(run("fit --in " + at("q.csv")).status, 0);
}

TEST_F(Cli, OtherSubcommands) {
    EXPECT_EQ(run("corollary-tail --k 1 --n 40 --R 2,4,8 --trials 50 --out " + at("c.csv")).status, 0);
    EXPECT_EQ(run("reduction-ratio --k 2 --n 64 --R 12 --trials 50 --out " + at("r.csv")).status, 0);
    EXPECT_EQ(run("family --d 2 --m 3 --s 40 --r 20 --trials 50 --out " + at("f.csv")).status, 0);
    EXPECT_EQ(run("fluctuation --r 16 --n 64 --trials 50 --out " + at("x.csv")).status, 0);
    EXPECT_EQ(run("segment-sup --n 27 --trials 20 --out " + at("s.csv")).status, 0);
    for (const char* f : {"c", "r", "f", "x", "s"}) {
        EXPECT_TRUE(fs::exists(at(std::string(f) + ".csv"))) << f;
        EXPECT_TRUE(fs::exists(at(std::string(f) + ".json"))) << f;
    }
}

}  // namespace
