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

#include "seqsub/query_rewrite.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <utility>

namespace seqsub {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void ValidateTuple(const RewriteInstance& instance,
                   const PartialAllocation& tuple) {
  const auto& base = instance.base();
  if (tuple.query_type >= base.num_types()) {
    throw InstanceError("plan.query_type", "unknown query type index");
  }
  for (std::size_t r : tuple.rewrites) {
    if (r >= instance.num_rewrites()) {
      throw InstanceError("plan.rewrites", "unknown rewrite index");
    }
  }
  if (tuple.caps.size() != base.num_ads()) {
    throw InstanceError("plan.caps", "one cap per ad is required");
  }
  for (double c : tuple.caps) {
    if (!(c >= 0.0)) throw InstanceError("plan.caps", "caps must be >= 0");
  }
}

void Deduct(BudgetVector& budgets, const std::vector<double>& spent) {
  for (std::size_t i = 0; i < budgets.size(); ++i) {
    budgets[i] -= spent[i];
    if (budgets[i] <= kExhaustedBudget) budgets[i] = 0.0;
  }
}

}  // namespace

RewriteInstance::RewriteInstance(AdInstance base, std::vector<Rewrite> rewrites,
                                 int k)
    : base_(std::move(base)), rewrites_(std::move(rewrites)) {
  if (rewrites_.empty()) {
    throw InstanceError("rewrites", "at least one rewrite is required");
  }
  for (std::size_t r = 0; r < rewrites_.size(); ++r) {
    const std::string field = "rewrites[" + std::to_string(r) + "]";
    if (rewrites_[r].ads.empty()) {
      throw InstanceError(field + ".ads", "must be non-empty");
    }
    for (std::size_t i : rewrites_[r].ads) {
      if (i >= base_.num_ads()) {
        throw InstanceError(field + ".ads", "unknown ad");
      }
    }
    for (std::size_t q = 0; q < r; ++q) {
      if (rewrites_[q].id == rewrites_[r].id) {
        throw InstanceError(field + ".id",
                            "duplicate rewrite id '" + rewrites_[r].id + "'");
      }
    }
  }
  if (k < 1) throw InstanceError("k", "must be >= 1");
  k_ = static_cast<std::size_t>(k);
  if (k_ > rewrites_.size()) {
    k_ = rewrites_.size();
    k_clamped_ = true;
  }
}

std::vector<bool> RewriteInstance::Reachable(
    const std::vector<std::size_t>& ys) const {
  std::vector<bool> out(base_.num_ads(), false);
  for (std::size_t r : ys) {
    for (std::size_t i : rewrites_.at(r).ads) out[i] = true;
  }
  return out;
}

SpendLedger SingleTypeAllocate(const AdInstance& instance, std::size_t j,
                               const std::vector<bool>& allowed,
                               const BudgetVector& caps, double horizon) {
  if (j >= instance.num_types()) {
    throw InstanceError("query_type", "unknown query type index");
  }
  const std::size_t m = instance.num_ads();
  if (allowed.size() != m || caps.size() != m) {
    throw InstanceError("caps", "one entry per ad is required");
  }
  SpendLedger ledger;
  ledger.spent.assign(m, 0.0);
  ledger.exhausted_at.assign(m, std::nullopt);
  BudgetVector rem = caps;
  for (auto& r : rem) {
    if (r <= kExhaustedBudget) r = 0.0;
  }

  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < m; ++i) {
    if (allowed[i] && instance.bid(i, j) > 0.0 && rem[i] > 0.0) {
      order.push_back(i);
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return instance.bid(a, j) > instance.bid(b, j);
  });
  const double q = instance.prob(j);
  if (q == 0.0 || !(horizon > 0.0)) {
    ledger.remaining = std::move(rem);
    return ledger;
  }

  // Ads in bid order, each for min(horizon, cap / rate), until the d lanes
  // of length `horizon` are full. A run that does not fit in the current
  // lane wraps to the start of the next one; since no run exceeds the
  // horizon, the two pieces never overlap in time.
  const double tape = static_cast<double>(instance.slots()) * horizon;
  double pos = 0.0;
  for (std::size_t i : order) {
    if (tape - pos <= kLengthTolerance * tape) break;
    const double rate = q * instance.bid(i, j);
    const double needed = rem[i] / rate;
    const double run = std::min({needed, horizon, tape - pos});
    const bool exhausts = needed <= run * (1.0 + 1e-12);
    const double spend = exhausts ? rem[i] : rate * run;
    ledger.spent[i] = spend;
    rem[i] = exhausts ? 0.0 : rem[i] - spend;
    if (rem[i] <= kExhaustedBudget) rem[i] = 0.0;

    const double lane_start = std::floor(pos / horizon) * horizon;
    const double end = pos + run;
    const double local_end = end - lane_start;
    double finish = 0.0;  // last moment the ad is running
    if (local_end > horizon * (1.0 + 1e-12)) {
      finish = horizon;                          // wrapped
      ledger.breakpoints.push_back(end - lane_start - horizon);
    } else {
      finish = std::min(local_end, horizon);
      ledger.breakpoints.push_back(finish);
    }
    if (rem[i] == 0.0) ledger.exhausted_at[i] = finish;
    pos = end;
  }
  std::vector<double>& bps = ledger.breakpoints;
  bps.erase(std::remove_if(bps.begin(), bps.end(),
                           [&](double t) {
                             return t <= kLengthTolerance ||
                                    t >= horizon - kLengthTolerance;
                           }),
            bps.end());
  std::sort(bps.begin(), bps.end());
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  ledger.remaining = std::move(rem);
  for (double v : ledger.spent) ledger.utility += v;
  return ledger;
}

PlanEvaluation EvaluatePlan(const RewriteInstance& instance,
                            const RewritePlan& plan) {
  const auto& base = instance.base();
  PlanEvaluation out;
  out.remaining = base.Budgets();
  std::vector<bool> seen(base.num_types(), false);
  for (const auto& tuple : plan.items()) {
    ValidateTuple(instance, tuple);
    if (seen[tuple.query_type]) out.duplicate_types = true;
    seen[tuple.query_type] = true;
    BudgetVector caps(base.num_ads());
    for (std::size_t i = 0; i < caps.size(); ++i) {
      caps[i] = std::min(out.remaining[i], tuple.caps[i]);
    }
    const auto ledger =
        SingleTypeAllocate(base, tuple.query_type,
                           instance.Reachable(tuple.rewrites), caps,
                           base.horizon());
    Deduct(out.remaining, ledger.spent);
    out.utility += ledger.utility;
    out.consumed.push_back(ledger.spent);
  }
  return out;
}

double RewriteSetGain(const RewriteInstance& instance, std::size_t j,
                      const std::vector<std::size_t>& ys,
                      const BudgetVector& remaining) {
  return SingleTypeAllocate(instance.base(), j, instance.Reachable(ys),
                            remaining, instance.base().horizon())
      .utility;
}

std::vector<std::size_t> GreedyRewriteSet(const RewriteInstance& instance,
                                          std::size_t j,
                                          const BudgetVector& remaining) {
  std::vector<std::size_t> ys;
  for (std::size_t w = 0; w < instance.k(); ++w) {
    double best_gain = kNegInf;
    std::size_t best_r = 0;
    for (std::size_t r = 0; r < instance.num_rewrites(); ++r) {
      if (std::find(ys.begin(), ys.end(), r) != ys.end()) continue;
      auto trial = ys;
      trial.push_back(r);
      const double gain = RewriteSetGain(instance, j, trial, remaining);
      if (gain > best_gain) {
        best_gain = gain;
        best_r = r;
      }
    }
    ys.push_back(best_r);
  }
  return ys;
}

RewriteResult GreedyRewrite(const RewriteInstance& instance) {
  const auto& base = instance.base();
  RewriteResult result;
  result.remaining = base.Budgets();
  std::vector<std::size_t> unassigned(base.num_types());
  std::iota(unassigned.begin(), unassigned.end(), std::size_t{0});

  while (!unassigned.empty()) {
    double best_gain = kNegInf;
    std::size_t best_pos = 0;
    std::vector<std::size_t> best_ys;
    for (std::size_t pos = 0; pos < unassigned.size(); ++pos) {
      const std::size_t j = unassigned[pos];
      const auto ys = GreedyRewriteSet(instance, j, result.remaining);
      const double gain = RewriteSetGain(instance, j, ys, result.remaining);
      if (gain > best_gain) {
        best_gain = gain;
        best_pos = pos;
        best_ys = ys;
      }
    }
    const std::size_t j = unassigned[best_pos];
    std::sort(best_ys.begin(), best_ys.end());
    const auto ledger =
        SingleTypeAllocate(base, j, instance.Reachable(best_ys),
                           result.remaining, base.horizon());
    result.plan.Append({j, best_ys, ledger.spent});
    Deduct(result.remaining, ledger.spent);
    result.utility += ledger.utility;
    unassigned.erase(unassigned.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  return result;
}

SequenceFunction<RewritePlan> PlanUtility(const RewriteInstance& instance) {
  return [&instance](const RewritePlan& plan) {
    return EvaluatePlan(instance, plan).utility;
  };
}

double BestTupleGain(const RewriteInstance& instance, const RewritePlan& prefix) {
  const auto remaining = EvaluatePlan(instance, prefix).remaining;
  const std::size_t r_count = instance.num_rewrites();
  double best = 0.0;
  for (std::size_t j = 0; j < instance.base().num_types(); ++j) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << r_count); ++mask) {
      if (static_cast<std::size_t>(std::popcount(mask)) > instance.k()) continue;
      std::vector<std::size_t> ys;
      for (std::size_t r = 0; r < r_count; ++r) {
        if (mask >> r & 1) ys.push_back(r);
      }
      best = std::max(best, RewriteSetGain(instance, j, ys, remaining));
    }
  }
  return best;
}

PartialAllocation RandomPartialAllocation(const RewriteInstance& instance,
                                          std::mt19937_64& rng) {
  const auto& base = instance.base();
  std::uniform_int_distribution<std::size_t> type(0, base.num_types() - 1);
  std::uniform_int_distribution<std::size_t> count(0, instance.k());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PartialAllocation tuple;
  tuple.query_type = type(rng);
  std::vector<std::size_t> rs(instance.num_rewrites());
  std::iota(rs.begin(), rs.end(), std::size_t{0});
  std::shuffle(rs.begin(), rs.end(), rng);
  rs.resize(count(rng));
  std::sort(rs.begin(), rs.end());
  tuple.rewrites = std::move(rs);
  tuple.caps.resize(base.num_ads());
  for (std::size_t i = 0; i < base.num_ads(); ++i) {
    tuple.caps[i] = unit(rng) < 0.5 ? base.budget(i) : base.budget(i) * unit(rng);
  }
  return tuple;
}

RewritePlan RandomPlan(const RewriteInstance& instance, std::mt19937_64& rng,
                       std::size_t max_tuples) {
  std::uniform_int_distribution<std::size_t> count(0, max_tuples);
  const std::size_t n = count(rng);
  RewritePlan plan;
  for (std::size_t t = 0; t < n; ++t) {
    plan.Append(RandomPartialAllocation(instance, rng));
  }
  return plan;
}

}  // namespace seqsub
