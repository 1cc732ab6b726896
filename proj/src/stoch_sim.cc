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

#include "seqsub/stoch_sim.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "seqsub/parallel.h"

namespace seqsub {

SimResult SimulateStream(const AdInstance& instance,
                         const AllocationStrategy& strategy,
                         const StreamConfig& config) {
  if (config.trials == 0) throw std::invalid_argument("trials must be >= 1");
  if (strategy.Length() > instance.horizon() + 1e-9) {
    throw SequenceError("strategy is longer than the horizon");
  }
  const double horizon = instance.horizon();
  const std::size_t queries =
      config.query_count > 0
          ? config.query_count
          : static_cast<std::size_t>(std::llround(horizon));
  if (queries == 0) throw std::invalid_argument("query_count must be >= 1");

  // Active configuration per query, independent of the trial.
  const auto& segs = strategy.segments();
  std::vector<const Configuration*> active(queries, nullptr);
  {
    std::size_t s = 0;
    double seg_end = segs.empty() ? 0.0 : segs[0].duration;
    for (std::size_t n = 0; n < queries; ++n) {
      const double t = static_cast<double>(n) * horizon / static_cast<double>(queries);
      while (s < segs.size() && t >= seg_end) {
        ++s;
        if (s < segs.size()) seg_end += segs[s].duration;
      }
      if (s < segs.size()) active[n] = &segs[s].action;
    }
  }

  std::vector<double> probs(instance.num_types());
  for (std::size_t j = 0; j < probs.size(); ++j) probs[j] = instance.prob(j);
  const BudgetVector budgets = instance.Budgets();

  SimResult result;
  result.query_count = queries;
  result.per_trial.assign(config.trials, 0.0);
  ParallelFor(config.trials, [&](std::size_t trial) {
    auto rng = StreamRng(config.seed, trial);
    std::discrete_distribution<std::size_t> type_dist(probs.begin(), probs.end());
    BudgetVector rem = budgets;
    for (std::size_t n = 0; n < queries; ++n) {
      const std::size_t j = type_dist(rng);
      if (active[n] == nullptr) continue;
      for (std::size_t i : active[n]->ads_for(j)) {
        const double pay = std::min(instance.bid(i, j), rem[i]);
        rem[i] -= pay;
        if (rem[i] <= kExhaustedBudget * std::max(1.0, budgets[i])) rem[i] = 0.0;
      }
    }
    double revenue = 0.0;
    for (std::size_t i = 0; i < rem.size(); ++i) revenue += budgets[i] - rem[i];
    result.per_trial[trial] = revenue;
  });

  double sum = 0.0;
  for (double r : result.per_trial) sum += r;
  result.mean = sum / static_cast<double>(config.trials);
  if (config.trials > 1) {
    double ss = 0.0;
    for (double r : result.per_trial) ss += (r - result.mean) * (r - result.mean);
    result.std = std::sqrt(ss / static_cast<double>(config.trials - 1));
  }
  result.fluid = EvaluateStrategy(instance, strategy).utility;
  return result;
}

AdInstance ScaleInstance(const AdInstance& instance, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
  std::vector<Ad> ads;
  std::vector<QueryType> types;
  std::vector<std::vector<double>> bids(instance.num_ads());
  for (std::size_t i = 0; i < instance.num_ads(); ++i) {
    ads.push_back(instance.ad(i));
    for (std::size_t j = 0; j < instance.num_types(); ++j) {
      bids[i].push_back(instance.bid(i, j) / scale);
    }
  }
  for (std::size_t j = 0; j < instance.num_types(); ++j) {
    types.push_back(instance.query_type(j));
  }
  return AdInstance(std::move(ads), std::move(types), std::move(bids),
                    instance.slots(), instance.horizon() * scale);
}

std::vector<ConvergenceRow> ConvergenceReport(const AdInstance& base,
                                              const std::vector<double>& scales,
                                              std::size_t trials,
                                              std::uint64_t seed) {
  std::vector<ConvergenceRow> rows;
  for (double scale : scales) {
    const AdInstance scaled = ScaleInstance(base, scale);
    const auto greedy = GreedyAllocate(scaled);
    const SimResult sim =
        SimulateStream(scaled, greedy.strategy, {seed, trials, 0});
    ConvergenceRow row{scale, sim.mean, sim.std, sim.fluid, 0.0};
    if (sim.fluid > 0.0) row.relative_gap = std::abs(sim.mean - sim.fluid) / sim.fluid;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace seqsub
