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

// seqsub: greedy sequence-submodular optimization toolkit.
//
//   seqsub allocate --instance I.json --out R.json [--oracle]
//   seqsub rewrite  --instance I.json --out R.json [--oracle]
//   seqsub simulate --instance I.json --trials N --seed S [--queries Q]
//                   [--per-trial] --out R.json
//   seqsub verify   --instance I.json --checks mono,submod,deriv,lemma1
//                   --samples N --seed S --out R.json

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "seqsub/commands.h"

namespace {

int Emit(const seqsub::CommandResult& result, const std::string& out_path,
         bool timing, std::chrono::steady_clock::time_point start) {
  seqsub::Json report = result.report;
  if (timing) {
    const auto elapsed = std::chrono::steady_clock::now() - start;
    report["wall_seconds"] = std::chrono::duration<double>(elapsed).count();
  }
  const std::string text = seqsub::SerializeReport(report);
  if (!result.message.empty()) std::cerr << result.message << "\n";
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) {
      std::cerr << "cannot write '" << out_path << "'\n";
      return seqsub::kExitInputError;
    }
    out << text;
  }
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Greedy maximization of submodular sequence functions"};
  app.require_subcommand(1);

  std::string out_path;
  bool timing = false;

  seqsub::AllocateOptions alloc;
  auto* allocate = app.add_subcommand("allocate", "Greedy fluid ad allocation");
  allocate->add_option("--instance", alloc.instance, "Instance JSON")->required();
  allocate->add_option("--out", out_path, "Report path ('-' for stdout)");
  allocate->add_flag("--oracle", alloc.oracle, "Add the exact LP optimum and ratio");
  allocate->add_flag("--timing", timing, "Include wall-clock seconds");

  seqsub::RewriteOptions rw;
  auto* rewrite = app.add_subcommand("rewrite", "Greedy query rewriting");
  rewrite->add_option("--instance", rw.instance, "Instance JSON")->required();
  rewrite->add_option("--out", out_path, "Report path ('-' for stdout)");
  rewrite->add_flag("--oracle", rw.oracle, "Add the enumerated optimum and ratio");
  rewrite->add_flag("--timing", timing, "Include wall-clock seconds");

  seqsub::SimulateOptions sim;
  auto* simulate =
      app.add_subcommand("simulate", "Monte Carlo query streams vs the fluid model");
  simulate->add_option("--instance", sim.instance, "Instance JSON")->required();
  simulate->add_option("--trials", sim.trials, "Number of trials")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "RNG seed")->required();
  simulate->add_option("--queries", sim.queries, "Queries per trial (default round(T))")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--per-trial", sim.per_trial, "Include per-trial revenues");
  simulate->add_option("--out", out_path, "Report path ('-' for stdout)");
  simulate->add_flag("--timing", timing, "Include wall-clock seconds");

  seqsub::VerifyOptions ver;
  auto* verify = app.add_subcommand("verify", "Randomized property checks");
  verify->add_option("--instance", ver.instance, "Instance JSON")->required();
  verify->add_option("--checks", ver.checks, "Comma-separated: mono,submod,deriv,lemma1")
      ->delimiter(',');
  verify->add_option("--samples", ver.samples, "Samples per check")
      ->check(CLI::PositiveNumber);
  verify->add_option("--seed", ver.seed, "RNG seed");
  verify->add_option("--out", out_path, "Report path ('-' for stdout)");
  verify->add_flag("--timing", timing, "Include wall-clock seconds");
  verify->add_flag("--negative-control", ver.negative_control)
      ->group("");  // test hook

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : seqsub::kExitInputError;
  }

  seqsub::CommandResult result;
  if (*allocate) {
    result = seqsub::RunAllocate(alloc);
  } else if (*rewrite) {
    result = seqsub::RunRewrite(rw);
  } else if (*simulate) {
    result = seqsub::RunSimulate(sim);
  } else {
    result = seqsub::RunVerify(ver);
  }
  return Emit(result, out_path, timing, start);
}
