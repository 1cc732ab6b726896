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

// The command-line operations as library calls. Each returns the report and
// the process exit code:
//   0 success, 1 property violation, 2 input error, 3 oracle guard exceeded.

#ifndef SEQSUB_COMMANDS_H_
#define SEQSUB_COMMANDS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seqsub/instance_io.h"

namespace seqsub {

enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitInputError = 2,
  kExitOracleGuard = 3,
};

struct CommandResult {
  int exit_code = kExitOk;
  Json report;
  std::string message;  // diagnostics for stderr
};

struct AllocateOptions {
  std::string instance;
  bool oracle = false;
};

struct RewriteOptions {
  std::string instance;
  bool oracle = false;
};

struct SimulateOptions {
  std::string instance;
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  std::size_t queries = 0;  // 0 = round(T)
  bool per_trial = false;
};

struct VerifyOptions {
  std::string instance;
  std::vector<std::string> checks = {"mono", "submod", "deriv", "lemma1"};
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  // Adds a check on u(A) = -|A|, which must fail.
  bool negative_control = false;
};

CommandResult RunAllocate(const AllocateOptions& opts);
CommandResult RunRewrite(const RewriteOptions& opts);
CommandResult RunSimulate(const SimulateOptions& opts);
CommandResult RunVerify(const VerifyOptions& opts);

// Key-sorted, indented, newline-terminated.
std::string SerializeReport(const Json& report);

}  // namespace seqsub

#endif  // SEQSUB_COMMANDS_H_
