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

// Exact baselines for small instances: brute-force sequence optimization,
// the fluid LP optimum in rational arithmetic, rewrite-assignment enumeration
// and a coverage-function fixture family. Size guards fail loudly rather than
// approximate.

#ifndef SEQSUB_ORACLE_H_
#define SEQSUB_ORACLE_H_

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqsub/ad_alloc.h"
#include "seqsub/greedy.h"
#include "seqsub/query_rewrite.h"
#include "seqsub/sequence.h"

namespace seqsub {

class OracleGuardError : public std::runtime_error {
 public:
  OracleGuardError(const std::string& what, double measured, double limit)
      : std::runtime_error(what + ": size " + Format(measured) +
                           " exceeds guard " + Format(limit)),
        measured_(measured),
        limit_(limit) {}
  double measured() const { return measured_; }
  double limit() const { return limit_; }

 private:
  static std::string Format(double v);
  double measured_;
  double limit_;
};

// ---------------------------------------------------------------------------
// Coverage fixtures: u(A) = total weight of the union of the sets covered by
// the actions appearing in A. Order and repetition are ignored, so u is
// non-decreasing and sequence-submodular.

struct CoverageSpec {
  std::vector<double> weights;              // universe element weights
  std::vector<std::vector<std::size_t>> covers;  // per action
  std::vector<std::string> names;           // optional action names
};

struct CoverageFixture {
  DiscreteFunction<int> u;
  ActionSet<int> actions;
};

// Throws std::invalid_argument on negative weights or bad element indices.
CoverageFixture MakeCoverageFixture(const CoverageSpec& spec);

// ---------------------------------------------------------------------------

template <typename Witness>
struct OptResult {
  double value = 0.0;
  Witness witness;
  std::string method;
};

inline constexpr double kDiscreteGuard = 1e6;

// Best sequence of length exactly `horizon`; ties to the lexicographically
// first sequence (in ActionSet order).
template <typename Action>
OptResult<DiscreteSequence<Action>> BruteForceDiscrete(
    const DiscreteFunction<Action>& u, const ActionSet<Action>& actions,
    std::size_t horizon) {
  const double size =
      std::pow(static_cast<double>(actions.size()), static_cast<double>(horizon));
  if (size > kDiscreteGuard) {
    throw OracleGuardError("brute_force_discrete", size, kDiscreteGuard);
  }
  OptResult<DiscreteSequence<Action>> best;
  best.method = "enumeration";
  std::vector<std::size_t> digits(horizon, 0);
  bool first = true;
  for (;;) {
    std::vector<Action> items;
    items.reserve(horizon);
    for (std::size_t d : digits) items.push_back(actions[d]);
    DiscreteSequence<Action> seq(std::move(items));
    const double v = u(seq);
    if (first || v > best.value) {
      best.value = v;
      best.witness = std::move(seq);
      first = false;
    }
    std::size_t pos = horizon;
    while (pos > 0) {
      --pos;
      if (++digits[pos] < actions.size()) break;
      digits[pos] = 0;
      if (pos == 0) return best;
    }
    if (horizon == 0) return best;
  }
}

// ---------------------------------------------------------------------------
// Fluid LP: maximize sum z_ij subject to
//   sum_j z_ij <= B_i                       (budgets)
//   sum_i z_ij / p_ij <= d * q_j * T        (slot time per type)
//   z_ij <= p_ij * q_j * T                  (one slot per ad and type)
// over allowed pairs with p_ij > 0.

inline constexpr std::size_t kLpGuard = 12;

struct FluidLpResult {
  double value = 0.0;
  std::string exact_value;  // rational, "num/den"
  std::vector<std::vector<double>> spend;  // z_ij
  std::string method = "rational simplex";
};

// `allowed[i][j]` restricts the pairs; all pairs when absent.
FluidLpResult LpOptFluid(
    const AdInstance& instance,
    const std::optional<std::vector<std::vector<bool>>>& allowed = std::nullopt);

// ---------------------------------------------------------------------------

inline constexpr double kRewriteGuard = 1e5;

struct RewriteAssignment {
  std::vector<std::vector<std::size_t>> rewrites;  // per query type
};

// Best assignment of at most k rewrites per type, each scored by LpOptFluid
// over the pairs reachable through it.
OptResult<RewriteAssignment> BruteForceRewriteOpt(const RewriteInstance& instance);

}  // namespace seqsub

#endif  // SEQSUB_ORACLE_H_
