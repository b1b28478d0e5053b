// Copyright 2026 The mpsstab Authors
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

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "support.hpp"

namespace mpsstab {
namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const std::string cmd = std::string(MPSSTAB_CLI) + " " + args + " 2>/dev/null";
    RunResult r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        return r;
    }
    std::array<char, 4096> buf{};
    size_t got = 0;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), got);
    }
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("mpsstab_cli_test_" + name);
}

size_t count_lines(const std::string& s) { return static_cast<size_t>(std::count(s.begin(), s.end(), '\n')); }

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run_cli("").code, 2);
    EXPECT_EQ(run_cli("learn --bogus 1").code, 2);
    EXPECT_EQ(run_cli("frobnicate").code, 2);
    EXPECT_EQ(run_cli("learn --state doped --n 4 --nt 5").code, 2);
    EXPECT_EQ(run_cli("learn --state nonsense").code, 2);
    EXPECT_EQ(run_cli("--help").code, 0);
}

TEST(Cli, LearnDopedState) {
    const RunResult r = run_cli("learn --state doped --n 8 --nt 3 --m 256 --seed 1");
    ASSERT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("\nk 5\n"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("nullity 3\n"), std::string::npos);
}

TEST(Cli, LearnFromFileWithJson) {
    const auto mps = temp_path("ghz.mps");
    const auto json = temp_path("ghz.json");
    MpsState ghz = zero_state(4);
    apply_circuit(ghz, Circuit{4, {Gate::h(0), Gate::cnot(0, 1), Gate::cnot(1, 2), Gate::cnot(2, 3)}, 4});
    save_mps(mps.string(), ghz);
    const RunResult r = run_cli("learn --mps " + mps.string() + " --m 32 --json " + json.string());
    ASSERT_EQ(r.code, 0);
    std::ifstream in(json);
    const auto j = nlohmann::json::parse(in);
    EXPECT_EQ(j["k"], 4);
    EXPECT_EQ(j["n"], 4);
    EXPECT_EQ(j["generators"].size(), 4u);
    EXPECT_EQ(run_cli("learn --state ghz --n 4 --m 32").out, r.out);
    std::filesystem::remove(mps);
    std::filesystem::remove(json);
}

TEST(Cli, CapacityExitCode) {
    EXPECT_EQ(run_cli("learn --state doped --n 6 --nt 2 --m 16 --bond-cap 1").code, 3);
}

TEST(Cli, Fig4RowsAndBound) {
    const RunResult r = run_cli("fig4 --n 10 --tau 2 --steps 6 --traj 5 --seed 7");
    ASSERT_EQ(r.code, 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "traj,n,k,chi_max");
    size_t rows = 0;
    while (std::getline(in, line)) {
        size_t traj = 0, n = 0, k = 0, chi = 0;
        char c1 = 0, c2 = 0, c3 = 0;
        std::istringstream ls(line);
        ls >> traj >> c1 >> n >> c2 >> k >> c3 >> chi;
        ASSERT_TRUE(ls && c1 == ',' && c2 == ',' && c3 == ',') << line;
        EXPECT_GE(static_cast<long>(k), 10L - 2L * static_cast<long>(n));
        ++rows;
    }
    EXPECT_EQ(rows, 35u);
}

TEST(Cli, ExperimentsAreReproducible) {
    const std::string f2 = "fig2 --n 6 --nt 0 2 --m 32 --traj 4 --iterations 2 --seed 5";
    const RunResult a = run_cli(f2);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(count_lines(a.out), 1u + 2 * 2);
    EXPECT_EQ(run_cli(f2).out, a.out);

    const std::string f3 = "fig3 --n 6 --nt 2 --m 2 16 --traj 3 --iterations 3 --seed 5";
    const RunResult b = run_cli(f3);
    ASSERT_EQ(b.code, 0);
    EXPECT_EQ(count_lines(b.out), 1u + 2 * 3);
    EXPECT_EQ(run_cli(f3).out, b.out);
}

TEST(Cli, ConfigFile) {
    const auto cfg = temp_path("fig4.cfg");
    const auto out = temp_path("fig4.csv");
    {
        std::ofstream os(cfg);
        os << "n=6\ntau=1\nsteps=2\ntraj=2\nseed=3\nm=16\n";
    }
    const RunResult a = run_cli("fig4 --config " + cfg.string());
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(count_lines(a.out), 1u + 2 * 3);
    // Command-line flags win over the file.
    const RunResult b = run_cli("fig4 --config " + cfg.string() + " --steps 1 -o " + out.string());
    ASSERT_EQ(b.code, 0);
    EXPECT_TRUE(b.out.empty());
    std::ifstream in(out);
    const std::string written((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    EXPECT_EQ(count_lines(written), 1u + 2 * 2);
    {
        std::ofstream os(cfg);
        os << "bogus=1\n";
    }
    EXPECT_EQ(run_cli("fig4 --config " + cfg.string()).code, 2);
    std::filesystem::remove(cfg);
    std::filesystem::remove(out);
}

TEST(Cli, OracleCheck) {
    const RunResult r = run_cli("oracle-check --n 6 --nt 2 --m 64 --traj 3 --seed 2");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(count_lines(r.out), 4u);
    EXPECT_EQ(run_cli("oracle-check --n 13 --traj 1").code, 2);
}

}  // namespace
}  // namespace mpsstab
