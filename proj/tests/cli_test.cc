// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "seqsub/commands.h"
#include "seqsub/instance_io.h"
#include "test_util.h"

namespace seqsub {
namespace {

std::string Data(const std::string& name) {
  return std::string(SEQSUB_TEST_DATA) + "/" + name;
}

struct ProcessRun {
  int exit_code = -1;
  std::string out;
};

// Runs the seqsub binary with stdout captured and stderr discarded.
ProcessRun RunBinary(const std::string& args) {
  const std::string cmd =
      std::string(SEQSUB_BINARY) + " " + args + " --out - 2>/dev/null";
  ProcessRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

TEST(AllocateCommandTest, I1WithOracle) {
  const CommandResult r = RunAllocate({Data("i1.json"), true});
  ASSERT_EQ(r.exit_code, kExitOk);
  const Json& out = r.report["outputs"];
  EXPECT_NEAR(out["utility"].get<double>(), 0.75, 1e-12);
  EXPECT_EQ(out["oracle"]["value"].get<double>(), 1.0);
  EXPECT_NEAR(out["ratio"].get<double>(), 0.75, 1e-12);
  EXPECT_EQ(out["strategy"].size(), 2u);
  EXPECT_EQ(r.report["command"], "allocate");
  EXPECT_EQ(r.report["instance_digest"].get<std::string>().size(), 64u);
}

TEST(AllocateCommandTest, I0RatioOne) {
  const CommandResult r = RunAllocate({Data("i0.json"), true});
  ASSERT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.report["outputs"]["utility"].get<double>(), 1.0);
  EXPECT_EQ(r.report["outputs"]["ratio"].get<double>(), 1.0);
}

TEST(AllocateCommandTest, NoRatioWithoutOracle) {
  const CommandResult r = RunAllocate({Data("i1.json"), false});
  EXPECT_FALSE(r.report["outputs"].contains("ratio"));
  EXPECT_FALSE(r.report["outputs"].contains("oracle"));
}

TEST(AllocateCommandTest, BadProbabilitiesExitTwo) {
  const CommandResult r = RunAllocate({Data("bad_prob.json"), false});
  EXPECT_EQ(r.exit_code, kExitInputError);
  EXPECT_EQ(r.report["field"], "query_types");
}

TEST(AllocateCommandTest, MissingFileExitTwo) {
  EXPECT_EQ(RunAllocate({Data("nope.json"), false}).exit_code, kExitInputError);
}

TEST(AllocateCommandTest, OracleGuardExitThree) {
  std::mt19937_64 rng(61);
  const AdInstance big = testing::RandomAdInstance(rng, 4, 4, 1);
  const std::string path = ::testing::TempDir() + "/big.json";
  std::ofstream(path) << AdInstanceToJson(big).dump();
  const CommandResult r = RunAllocate({path, true});
  EXPECT_EQ(r.exit_code, kExitOracleGuard);
  EXPECT_TRUE(r.report["outputs"].contains("utility"));
}

TEST(RewriteCommandTest, I3) {
  const CommandResult k1 = RunRewrite({Data("i3_k1.json"), true});
  ASSERT_EQ(k1.exit_code, kExitOk);
  EXPECT_NEAR(k1.report["outputs"]["utility"].get<double>(), 0.5, 1e-12);
  EXPECT_NEAR(k1.report["outputs"]["ratio"].get<double>(), 1.0, 1e-12);
  const CommandResult k2 = RunRewrite({Data("i3_k2.json"), true});
  ASSERT_EQ(k2.exit_code, kExitOk);
  EXPECT_NEAR(k2.report["outputs"]["utility"].get<double>(), 0.7, 1e-12);
  EXPECT_NEAR(k2.report["outputs"]["ratio"].get<double>(), 1.0, 1e-12);
}

TEST(RewriteCommandTest, KZeroExitTwo) {
  const CommandResult r = RunRewrite({Data("i3_k0.json"), false});
  EXPECT_EQ(r.exit_code, kExitInputError);
  EXPECT_EQ(r.report["field"], "k");
}

TEST(RewriteCommandTest, MissingRewritesExitTwo) {
  EXPECT_EQ(RunRewrite({Data("i1.json"), false}).exit_code, kExitInputError);
}

TEST(SimulateCommandTest, ScaledI1) {
  const CommandResult r = RunSimulate({Data("i1_scaled.json"), 1000, 42, 0, false});
  ASSERT_EQ(r.exit_code, kExitOk);
  const Json& out = r.report["outputs"];
  EXPECT_LT(out["relative_gap"].get<double>(), 0.02);
  EXPECT_EQ(r.report["rng"], kRngAlgorithm);
}

TEST(SimulateCommandTest, DeterministicSingleType) {
  const CommandResult r = RunSimulate({Data("i0_scaled.json"), 1, 0, 0, true});
  ASSERT_EQ(r.exit_code, kExitOk);
  EXPECT_EQ(r.report["outputs"]["mean"].get<double>(),
            r.report["outputs"]["fluid"].get<double>());
  EXPECT_EQ(r.report["outputs"]["per_trial"].size(), 1u);
}

TEST(VerifyCommandTest, I1AllChecksPass) {
  VerifyOptions opts;
  opts.instance = Data("i1.json");
  const CommandResult r = RunVerify(opts);
  EXPECT_EQ(r.exit_code, kExitOk);
  EXPECT_TRUE(r.report["outputs"]["passed"].get<bool>());
}

TEST(VerifyCommandTest, NegativeControlExitOne) {
  VerifyOptions opts;
  opts.instance = Data("i1.json");
  opts.checks = {"mono"};
  opts.samples = 200;
  opts.negative_control = true;
  const CommandResult r = RunVerify(opts);
  EXPECT_EQ(r.exit_code, kExitViolation);
  EXPECT_FALSE(
      r.report["outputs"]["checks"]["negative_control"]["ad"]["witnesses"].empty());
}

TEST(VerifyCommandTest, UnknownCheckExitTwo) {
  VerifyOptions opts;
  opts.instance = Data("i1.json");
  opts.checks = {"bogus"};
  EXPECT_EQ(RunVerify(opts).exit_code, kExitInputError);
}

TEST(InstanceIoTest, RoundTrip) {
  std::mt19937_64 rng(62);
  for (int trial = 0; trial < 50; ++trial) {
    const RewriteInstance inst = testing::RandomSmallRewriteInstance(rng);
    const Json doc = RewriteInstanceToJson(inst);
    const RewriteInstance back = ParseRewriteInstance(doc);
    EXPECT_EQ(RewriteInstanceToJson(back), doc);
  }
}

TEST(InstanceIoTest, SchemaErrorsNameTheField) {
  const auto field_of = [](const char* text) {
    try {
      ParseAdInstance(Json::parse(text));
    } catch (const InstanceError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  EXPECT_EQ(field_of(R"({"query_types": [], "bids": {}, "slots": 1, "horizon": 1})"),
            "ads");
  EXPECT_EQ(field_of(R"({"ads": [{"id": "a", "budget": "x"}], "query_types":
      [{"id": "t", "prob": 1}], "bids": {}, "slots": 1, "horizon": 1})"),
            "ads[0].budget");
  EXPECT_EQ(field_of(R"({"ads": [{"id": "a", "budget": 1}], "query_types":
      [{"id": "t", "prob": 1}], "bids": {"b": {"t": 1}}, "slots": 1,
      "horizon": 1})"),
            "bids.b");
  EXPECT_EQ(field_of(R"({"ads": [{"id": "a", "budget": 1}], "query_types":
      [{"id": "t", "prob": 1}], "bids": {}, "slots": 1.5, "horizon": 1})"),
            "slots");
}

TEST(InstanceIoTest, Sha256KnownVector) {
  EXPECT_EQ(Sha256Hex("abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(BinaryTest, ExitCodes) {
  EXPECT_EQ(RunBinary("allocate --instance " + Data("i1.json")).exit_code, 0);
  EXPECT_EQ(RunBinary("allocate --instance " + Data("bad_prob.json")).exit_code,
            2);
  EXPECT_EQ(RunBinary("rewrite --instance " + Data("i3_k0.json")).exit_code, 2);
  EXPECT_EQ(RunBinary("simulate --instance " + Data("i1.json") +
                      " --trials 0 --seed 1")
                .exit_code,
            2);
  EXPECT_EQ(RunBinary("verify --instance " + Data("i1.json") +
                      " --checks mono,nope")
                .exit_code,
            2);
  EXPECT_EQ(RunBinary("verify --instance " + Data("i1.json") +
                      " --checks mono --samples 100 --negative-control")
                .exit_code,
            1);
  EXPECT_EQ(RunBinary("frobnicate").exit_code, 2);
}

TEST(BinaryTest, ReportsAreByteIdentical) {
  for (const std::string args :
       {"allocate --oracle --instance " + Data("i1.json"),
        "rewrite --oracle --instance " + Data("i3_k2.json"),
        "simulate --trials 200 --seed 7 --per-trial --instance " +
            Data("i1_scaled.json"),
        "verify --samples 300 --seed 3 --instance " + Data("i3_k2.json")}) {
    const ProcessRun a = RunBinary(args);
    const ProcessRun b = RunBinary(args);
    ASSERT_EQ(a.exit_code, 0) << args;
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out) << args;
  }
}

TEST(BinaryTest, ReportIsKeySortedJson) {
  const ProcessRun r = RunBinary("allocate --instance " + Data("i1.json"));
  const Json doc = Json::parse(r.out);
  EXPECT_EQ(SerializeReport(doc), r.out);
}

}  // namespace
}  // namespace seqsub
