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

// Fluid model of budgeted online ad allocation.
//
// Queries of type j arrive at rate q_j in virtual time. A configuration maps
// each query type to at most `slots` ads; while it is active, ad i accrues
// spend at rate sum_{j : i in Q_j} q_j * p_ij until its budget is gone. The
// utility of an allocation strategy (a timed sequence of configurations) is
// the total money spent.

#ifndef SEQSUB_AD_ALLOC_H_
#define SEQSUB_AD_ALLOC_H_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqsub/checks.h"
#include "seqsub/greedy.h"
#include "seqsub/sequence.h"

namespace seqsub {

// Remaining budgets at or below this are treated as exhausted.
inline constexpr double kExhaustedBudget = 1e-12;

// Thrown when instance data violates its invariants. `field` names the
// offending input field.
class InstanceError : public std::invalid_argument {
 public:
  InstanceError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message),
        field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct Ad {
  std::string id;
  double budget = 0.0;
};

struct QueryType {
  std::string id;
  double prob = 0.0;
};

using BudgetVector = std::vector<double>;

class AdInstance {
 public:
  // bids[i][j] = p_ij. Throws InstanceError on invalid data.
  AdInstance(std::vector<Ad> ads, std::vector<QueryType> query_types,
             std::vector<std::vector<double>> bids, int slots, double horizon);

  std::size_t num_ads() const { return ads_.size(); }
  std::size_t num_types() const { return types_.size(); }
  const Ad& ad(std::size_t i) const { return ads_[i]; }
  const QueryType& query_type(std::size_t j) const { return types_[j]; }
  double bid(std::size_t i, std::size_t j) const { return bids_[i][j]; }
  double budget(std::size_t i) const { return ads_[i].budget; }
  double prob(std::size_t j) const { return types_[j].prob; }
  int slots() const { return slots_; }
  double horizon() const { return horizon_; }

  BudgetVector Budgets() const;
  double TotalBudget() const;
  std::optional<std::size_t> AdIndex(const std::string& id) const;
  std::optional<std::size_t> TypeIndex(const std::string& id) const;

 private:
  std::vector<Ad> ads_;
  std::vector<QueryType> types_;
  std::vector<std::vector<double>> bids_;
  int slots_;
  double horizon_;
};

// Q_j(s) for every query type j, as ad indices.
class Configuration {
 public:
  Configuration() = default;
  // Validates |Q_j| <= slots and ad indices; throws InstanceError.
  Configuration(const AdInstance& instance,
                std::vector<std::vector<std::size_t>> assignment);

  // The configuration with no ads assigned.
  static Configuration Empty(const AdInstance& instance);

  const std::vector<std::vector<std::size_t>>& assignment() const {
    return assignment_;
  }
  const std::vector<std::size_t>& ads_for(std::size_t j) const {
    return assignment_[j];
  }
  bool IsEmpty() const;

  bool operator==(const Configuration&) const = default;

 private:
  std::vector<std::vector<std::size_t>> assignment_;
};

using AllocationStrategy = TimedSequence<Configuration>;

struct SpendLedger {
  std::vector<double> spent;
  BudgetVector remaining;
  double utility = 0.0;
  // Sorted times at which the spend-rate vector may change: configuration
  // switches and budget exhaustions.
  std::vector<double> breakpoints;
  // Exhaustion time per ad, empty if the ad never ran out.
  std::vector<std::optional<double>> exhausted_at;
};

// Per-ad spend rates rho_i of `config`, ignoring budgets.
std::vector<double> SpendRates(const AdInstance& instance,
                               const Configuration& config);

// r(s) restricted to ads with remaining budget.
double RevenueRate(const AdInstance& instance, const Configuration& config,
                   const BudgetVector& remaining);

// Fluid evaluation of `strategy` starting from `initial` budgets (defaults
// to the instance budgets).
SpendLedger EvaluateStrategy(const AdInstance& instance,
                             const AllocationStrategy& strategy);
SpendLedger EvaluateStrategy(const AdInstance& instance,
                             const AllocationStrategy& strategy,
                             const BudgetVector& initial);

// Marginal rate u̇_s(delta | prefix), right-limit convention.
double MarginalRate(const AdInstance& instance, const Configuration& config,
                    double delta, const AllocationStrategy& prefix);

// Offsets delta > 0 at which u̇_s(delta | prefix) changes.
std::vector<double> MarginalRateBreakpoints(const AdInstance& instance,
                                            const Configuration& config,
                                            const AllocationStrategy& prefix);

// Top-`slots` ads by bid among those with remaining budget and positive bid,
// per query type; ties to the lower ad index.
Configuration BestConfiguration(const AdInstance& instance,
                                const BudgetVector& remaining);

// Incremental oracle for GreedyContinuous: best configuration for the
// budgets left after `prefix`, held until its first exhaustion. When no
// configuration has a positive rate the previous one is held to the horizon.
ContinuousOracle<Configuration> ExhaustionOracle(const AdInstance& instance);

struct GreedyAllocation {
  AllocationStrategy strategy;
  SpendLedger ledger;
  // Switches between consecutive segments (equal neighbours are merged).
  std::size_t configuration_changes = 0;
  // True when the horizon ends with a stretch of zero revenue rate.
  bool padded = false;
};

GreedyAllocation GreedyAllocate(const AdInstance& instance);

// The fluid utility and its rate model, for the property checkers.
SequenceFunction<AllocationStrategy> StrategyUtility(const AdInstance& instance);
RateModel<Configuration> AdRateModel(const AdInstance& instance);

// max over configurations of u̇_s(0 | prefix).
double BestMarginalRate(const AdInstance& instance,
                        const AllocationStrategy& prefix);

// Uniformly random configuration (each type gets a random subset of at most
// `slots` ads, any bids).
Configuration RandomConfiguration(const AdInstance& instance,
                                  std::mt19937_64& rng);

// Random strategy of up to `max_segments` segments with total length at most
// `max_length`.
AllocationStrategy RandomStrategy(const AdInstance& instance,
                                  std::mt19937_64& rng, std::size_t max_segments,
                                  double max_length);

}  // namespace seqsub

#endif  // SEQSUB_AD_ALLOC_H_
