// Copyright 2026 The mmes Authors
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

#include <json.hpp>

#include "cli.hpp"
#include "mmes/canonical.hpp"
#include "mmes/qstate.hpp"

namespace mmes::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("mmes_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const char* name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, TheoryForFourQubits) {
  const auto r = run({"theory", "--n", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_NEAR(doc["mu"].get<double>(), 8.0 / 17.0, 1e-15);
  EXPECT_NEAR(doc["sigma2"].get<double>(), 450.0 / 98838.0, 1e-15);
}

TEST_F(Cli, PurityOfBellState) {
  save_state(PureState::ghz(2), path("bell.json"), StateFormat::Json);
  const auto r = run({"purity", "--in", path("bell.json"), "--partition", "0"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(std::stod(r.out), 0.5, 1e-15);
  const auto j = run({"purity", "--in", path("bell.json"), "--partition", "mask:2", "--format", "json"});
  EXPECT_NEAR(json::parse(j.out)["purity"].get<double>(), 0.5, 1e-15);
}

TEST_F(Cli, AnnealFourQubits) {
  const auto r = run({"anneal", "--n", "4", "--restarts", "8", "--seed", "7", "--levels", "10", "--sweeps", "300",
                      "--state-out", path("best.bin")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto doc = json::parse(r.out);
  EXPECT_NEAR(doc["energy"].get<double>(), 1.0 / 3.0, 1e-3);
  EXPECT_EQ(doc["seed"].get<std::uint64_t>(), 7u);
  EXPECT_NE(r.err.find("seed 7"), std::string::npos);

  const auto pot = run({"potential", "--in", path("best.bin")});
  EXPECT_NEAR(std::stod(pot.out), doc["energy"].get<double>(), 1e-12);
  const auto cert = json::parse(run({"certify", "--in", path("best.bin")}).out);
  EXPECT_FALSE(cert["perfect"].get<bool>());
}

TEST_F(Cli, DeterministicGivenSeed) {
  const std::vector<std::string> args{"canonical", "--n", "3", "--beta", "5", "--steps", "800", "--burn-in", "100",
                                      "--seed", "11", "--chains", "2"};
  const auto a = run(args);
  const auto b = run(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.err, b.err);
}

TEST_F(Cli, SeedIsLoggedWhenOmitted) {
  const auto r = run({"haar-sample", "--n", "3"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.err.rfind("seed ", 0), 0u);
  EXPECT_NO_THROW(from_json(r.out));
}

TEST_F(Cli, SamplePipelineFilesAreWellFormed) {
  ASSERT_EQ(run({"canonical", "--n", "3", "--beta", "0", "--steps", "3000", "--burn-in", "500", "--seed", "2",
                 "--out", path("s.csv")})
                .code,
            0);
  std::ifstream in(path("s.csv"));
  const auto samples = read_samples_csv(in);
  EXPECT_EQ(samples.size(), 2500u);

  const auto rw = run({"reweight", "--in", path("s.csv"), "--beta0", "0", "--beta", "0"});
  ASSERT_EQ(rw.code, 0) << rw.err;
  EXPECT_NEAR(json::parse(rw.out)["mean"].get<double>(), mean_estimate(samples.energies).mean, 1e-15);

  const auto hist = run({"hist", "--in", path("s.csv"), "--bins", "7"});
  ASSERT_EQ(hist.code, 0);
  std::istringstream lines(hist.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "center,density");
  int rows = 0;
  while (std::getline(lines, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 1);
    ++rows;
  }
  EXPECT_EQ(rows, 7);

  const auto cum = run({"cumulants", "--in", path("s.csv"), "--order", "2"});
  ASSERT_EQ(cum.code, 0) << cum.err;
  EXPECT_EQ(json::parse(cum.out)["cumulants"].size(), 2u);
}

TEST_F(Cli, BetaScanCsv) {
  const auto r = run({"beta-scan", "--n", "3", "--betas", "100,-100,0", "--steps", "2000", "--burn-in", "200",
                      "--seed", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "beta,mean,se,acceptance");
  std::getline(lines, line);
  EXPECT_EQ(line.substr(0, 5), "-100,");
}

TEST_F(Cli, HaarSampleFormats) {
  ASSERT_EQ(run({"haar-sample", "--n", "4", "--seed", "5", "--format", "binary", "--out", path("h.bin")}).code, 0);
  ASSERT_EQ(run({"haar-sample", "--n", "4", "--seed", "5", "--out", path("h.json")}).code, 0);
  EXPECT_TRUE(load_state(path("h.bin")) == load_state(path("h.json")));
  EXPECT_TRUE(load_state(path("h.bin")) == haar_sample(4, 5));

  const auto csv = run({"haar-sample", "--n", "4", "--seed", "5", "--format", "csv", "--samples", "3"});
  EXPECT_EQ(csv.out.substr(0, 7), "step,E\n");
  EXPECT_EQ(std::count(csv.out.begin(), csv.out.end(), '\n'), 4);
}

TEST_F(Cli, UsageErrorsExitTwoWithHelp) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {},
           {"bogus"},
           {"theory", "--n", "4", "--unknown", "1"},
           {"theory"},
           {"theory", "--n", "1"},
           {"anneal", "--n", "4", "--sweeps", "0"},
           {"anneal", "--n", "4", "--direction", "sideways"},
           {"canonical", "--n", "3", "--beta", "1", "--steps", "10", "--burn-in", "20"},
           {"purity", "--in", "x.json"},
           {"theory", "--n", "4", "--format", "xml"},
       }) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 2) << (args.empty() ? "<empty>" : args[0]);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
  }
}

TEST_F(Cli, RuntimeErrorsExitOne) {
  EXPECT_EQ(run({"potential", "--in", path("missing.json")}).code, 1);
  std::ofstream(path("bad.json")) << R"({"n":1,"amplitudes":[[1,0]]})";
  EXPECT_EQ(run({"potential", "--in", path("bad.json")}).code, 1);
  std::ofstream(path("unnormalized.json")) << R"({"n":2,"amplitudes":[[1,0],[1,0],[0,0],[0,0]]})";
  EXPECT_EQ(run({"certify", "--in", path("unnormalized.json")}).code, 1);
}

TEST_F(Cli, QubitCapIsEnforced) {
  const int saved = max_qubits();
  set_max_qubits(6);
  EXPECT_NE(run({"haar-sample", "--n", "7", "--seed", "1"}).code, 0);
  set_max_qubits(saved);
}

}  // namespace
}  // namespace mmes::cli
