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

// Query rewriting on top of the fluid ad model.
//
// A plan is a sequence of partial allocations (j, Y_j, caps). Its utility is
// computed tuple by tuple: type j is served alone over the whole horizon by
// the single-type greedy, restricted to ads reachable through Y_j and capped
// by min(remaining budget, cap); the spend is then deducted from the global
// budgets. GreedyRewrite appends, per step, the type whose greedily chosen
// k rewrites give the largest marginal utility.

#ifndef SEQSUB_QUERY_REWRITE_H_
#define SEQSUB_QUERY_REWRITE_H_

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "seqsub/ad_alloc.h"
#include "seqsub/checks.h"
#include "seqsub/sequence.h"

namespace seqsub {

struct Rewrite {
  std::string id;
  std::vector<std::size_t> ads;  // W_r, ad indices
};

class RewriteInstance {
 public:
  // Throws InstanceError. A k larger than the number of rewrites is clamped
  // and reported through k_clamped().
  RewriteInstance(AdInstance base, std::vector<Rewrite> rewrites, int k);

  const AdInstance& base() const { return base_; }
  const std::vector<Rewrite>& rewrites() const { return rewrites_; }
  std::size_t num_rewrites() const { return rewrites_.size(); }
  std::size_t k() const { return k_; }
  bool k_clamped() const { return k_clamped_; }

  // Per-ad reachability through the rewrite set `ys` (rewrite indices).
  std::vector<bool> Reachable(const std::vector<std::size_t>& ys) const;

 private:
  AdInstance base_;
  std::vector<Rewrite> rewrites_;
  std::size_t k_;
  bool k_clamped_ = false;
};

// (j, Y_j, B^j).
struct PartialAllocation {
  std::size_t query_type = 0;
  std::vector<std::size_t> rewrites;
  BudgetVector caps;

  bool operator==(const PartialAllocation&) const = default;
};

using RewritePlan = DiscreteSequence<PartialAllocation>;

// Optimal fluid allocation of type-j queries alone over [0, horizon). Allowed
// ads are taken in bid order, each served for min(horizon, cap / (q_j p_ij))
// until the `slots` lanes are full; runs are packed into the lanes by
// wrap-around. With one slot this is the rule "serve the best ad with cap
// left, replace it when it runs out".
SpendLedger SingleTypeAllocate(const AdInstance& instance, std::size_t j,
                               const std::vector<bool>& allowed,
                               const BudgetVector& caps, double horizon);

struct PlanEvaluation {
  double utility = 0.0;
  BudgetVector remaining;
  // Budget consumed by each tuple, in plan order.
  std::vector<BudgetVector> consumed;
  bool duplicate_types = false;
};

PlanEvaluation EvaluatePlan(const RewriteInstance& instance,
                            const RewritePlan& plan);

struct RewriteResult {
  RewritePlan plan;  // caps hold the recorded consumption B^{j'}
  double utility = 0.0;
  BudgetVector remaining;
};

// u((j, Y, remaining) | H) for a prefix H that left `remaining` budgets.
double RewriteSetGain(const RewriteInstance& instance, std::size_t j,
                      const std::vector<std::size_t>& ys,
                      const BudgetVector& remaining);

// Inner greedy: k rewrites for type j, each maximizing the marginal gain;
// ties to the lower rewrite index. Returned in insertion order.
std::vector<std::size_t> GreedyRewriteSet(const RewriteInstance& instance,
                                          std::size_t j,
                                          const BudgetVector& remaining);

RewriteResult GreedyRewrite(const RewriteInstance& instance);

SequenceFunction<RewritePlan> PlanUtility(const RewriteInstance& instance);

// max over (j, Y with |Y| <= k, caps) of u((j, Y, caps) | prefix). Spend is
// monotone in the caps, so full budgets are used and only (j, Y) enumerated.
double BestTupleGain(const RewriteInstance& instance, const RewritePlan& prefix);

// A random tuple: uniform type, 0..k random rewrites, caps that are either
// the full budget B_i or uniform in [0, B_i].
PartialAllocation RandomPartialAllocation(const RewriteInstance& instance,
                                          std::mt19937_64& rng);
RewritePlan RandomPlan(const RewriteInstance& instance, std::mt19937_64& rng,
                       std::size_t max_tuples);

}  // namespace seqsub

#endif  // SEQSUB_QUERY_REWRITE_H_
