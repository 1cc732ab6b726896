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

#include "seqsub/ad_alloc.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <utility>

namespace seqsub {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckBudgetVector(const AdInstance& instance, const BudgetVector& b) {
  if (b.size() != instance.num_ads()) {
    throw InstanceError("budgets", "expected " +
                                       std::to_string(instance.num_ads()) +
                                       " entries, got " +
                                       std::to_string(b.size()));
  }
}

void SortUnique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end(),
                      [](double x, double y) {
                        return std::abs(x - y) <= kLengthTolerance;
                      }),
          v.end());
}

}  // namespace

AdInstance::AdInstance(std::vector<Ad> ads, std::vector<QueryType> query_types,
                       std::vector<std::vector<double>> bids, int slots,
                       double horizon)
    : ads_(std::move(ads)),
      types_(std::move(query_types)),
      bids_(std::move(bids)),
      slots_(slots),
      horizon_(horizon) {
  if (ads_.empty()) throw InstanceError("ads", "at least one ad is required");
  if (types_.empty()) {
    throw InstanceError("query_types", "at least one query type is required");
  }
  for (std::size_t i = 0; i < ads_.size(); ++i) {
    if (!(ads_[i].budget >= 0.0) || !std::isfinite(ads_[i].budget)) {
      throw InstanceError("ads[" + std::to_string(i) + "].budget",
                          "must be a finite number >= 0");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (ads_[k].id == ads_[i].id) {
        throw InstanceError("ads[" + std::to_string(i) + "].id",
                            "duplicate ad id '" + ads_[i].id + "'");
      }
    }
  }
  double total = 0.0;
  for (std::size_t j = 0; j < types_.size(); ++j) {
    if (!(types_[j].prob >= 0.0) || !std::isfinite(types_[j].prob)) {
      throw InstanceError("query_types[" + std::to_string(j) + "].prob",
                          "must be a finite number >= 0");
    }
    for (std::size_t k = 0; k < j; ++k) {
      if (types_[k].id == types_[j].id) {
        throw InstanceError("query_types[" + std::to_string(j) + "].id",
                            "duplicate query type id '" + types_[j].id + "'");
      }
    }
    total += types_[j].prob;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw InstanceError("query_types",
                        "probabilities sum to " + std::to_string(total) +
                            ", expected 1");
  }
  if (bids_.size() != ads_.size()) {
    throw InstanceError("bids", "one row per ad is required");
  }
  for (std::size_t i = 0; i < bids_.size(); ++i) {
    if (bids_[i].size() != types_.size()) {
      throw InstanceError("bids", "one entry per query type is required");
    }
    for (double p : bids_[i]) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw InstanceError("bids." + ads_[i].id, "bids must be finite and >= 0");
      }
    }
  }
  if (slots_ < 1) throw InstanceError("slots", "must be >= 1");
  if (!(horizon_ > 0.0) || !std::isfinite(horizon_)) {
    throw InstanceError("horizon", "must be a finite number > 0");
  }
}

BudgetVector AdInstance::Budgets() const {
  BudgetVector b;
  b.reserve(ads_.size());
  for (const auto& a : ads_) b.push_back(a.budget);
  return b;
}

double AdInstance::TotalBudget() const {
  double total = 0.0;
  for (const auto& a : ads_) total += a.budget;
  return total;
}

std::optional<std::size_t> AdInstance::AdIndex(const std::string& id) const {
  for (std::size_t i = 0; i < ads_.size(); ++i) {
    if (ads_[i].id == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> AdInstance::TypeIndex(const std::string& id) const {
  for (std::size_t j = 0; j < types_.size(); ++j) {
    if (types_[j].id == id) return j;
  }
  return std::nullopt;
}

Configuration::Configuration(const AdInstance& instance,
                             std::vector<std::vector<std::size_t>> assignment)
    : assignment_(std::move(assignment)) {
  if (assignment_.size() != instance.num_types()) {
    throw InstanceError("configuration", "one ad list per query type required");
  }
  for (const auto& ads : assignment_) {
    if (ads.size() > static_cast<std::size_t>(instance.slots())) {
      throw InstanceError("configuration", "more ads than slots");
    }
    for (std::size_t k = 0; k < ads.size(); ++k) {
      if (ads[k] >= instance.num_ads()) {
        throw InstanceError("configuration", "unknown ad index");
      }
      for (std::size_t l = 0; l < k; ++l) {
        if (ads[l] == ads[k]) {
          throw InstanceError("configuration", "ad repeated within a type");
        }
      }
    }
  }
}

Configuration Configuration::Empty(const AdInstance& instance) {
  return Configuration(instance, std::vector<std::vector<std::size_t>>(
                                     instance.num_types()));
}

bool Configuration::IsEmpty() const {
  return std::all_of(assignment_.begin(), assignment_.end(),
                     [](const auto& ads) { return ads.empty(); });
}

std::vector<double> SpendRates(const AdInstance& instance,
                               const Configuration& config) {
  std::vector<double> rates(instance.num_ads(), 0.0);
  for (std::size_t j = 0; j < config.assignment().size(); ++j) {
    for (std::size_t i : config.ads_for(j)) {
      rates[i] += instance.prob(j) * instance.bid(i, j);
    }
  }
  return rates;
}

double RevenueRate(const AdInstance& instance, const Configuration& config,
                   const BudgetVector& remaining) {
  CheckBudgetVector(instance, remaining);
  double rate = 0.0;
  for (std::size_t j = 0; j < config.assignment().size(); ++j) {
    double type_rate = 0.0;
    for (std::size_t i : config.ads_for(j)) {
      if (remaining[i] > kExhaustedBudget) type_rate += instance.bid(i, j);
    }
    rate += instance.prob(j) * type_rate;
  }
  return rate;
}

SpendLedger EvaluateStrategy(const AdInstance& instance,
                             const AllocationStrategy& strategy) {
  return EvaluateStrategy(instance, strategy, instance.Budgets());
}

SpendLedger EvaluateStrategy(const AdInstance& instance,
                             const AllocationStrategy& strategy,
                             const BudgetVector& initial) {
  CheckBudgetVector(instance, initial);
  const std::size_t m = instance.num_ads();
  SpendLedger ledger;
  ledger.remaining = initial;
  ledger.exhausted_at.assign(m, std::nullopt);
  auto& rem = ledger.remaining;
  for (std::size_t i = 0; i < m; ++i) {
    if (rem[i] <= kExhaustedBudget) {
      rem[i] = 0.0;
      ledger.exhausted_at[i] = 0.0;
    }
  }

  double t = 0.0;
  for (const auto& seg : strategy.segments()) {
    if (t > 0.0) ledger.breakpoints.push_back(t);
    const auto rates = SpendRates(instance, seg.action);
    double left = seg.duration;
    while (left > 0.0) {
      double step = left;
      for (std::size_t i = 0; i < m; ++i) {
        if (rem[i] > 0.0 && rates[i] > 0.0) {
          step = std::min(step, rem[i] / rates[i]);
        }
      }
      bool exhausted_any = false;
      for (std::size_t i = 0; i < m; ++i) {
        if (!(rem[i] > 0.0 && rates[i] > 0.0)) continue;
        // Simultaneous exhaustions (to rounding) are one event.
        if (rem[i] / rates[i] <= step * (1.0 + 1e-12)) {
          rem[i] = 0.0;
        } else {
          rem[i] -= rates[i] * step;
          if (rem[i] <= kExhaustedBudget) rem[i] = 0.0;
        }
        if (rem[i] == 0.0) {
          ledger.exhausted_at[i] = t + step;
          exhausted_any = true;
        }
      }
      t += step;
      left -= step;
      if (exhausted_any) ledger.breakpoints.push_back(t);
    }
  }

  ledger.spent.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    ledger.spent[i] = rem[i] == 0.0 ? initial[i] : initial[i] - rem[i];
    ledger.utility += ledger.spent[i];
  }
  SortUnique(ledger.breakpoints);
  return ledger;
}

double MarginalRate(const AdInstance& instance, const Configuration& config,
                    double delta, const AllocationStrategy& prefix) {
  if (delta < 0.0) throw SequenceError("delta must be >= 0");
  AllocationStrategy played = prefix;
  if (delta > 0.0) played.Append(config, delta);
  return RevenueRate(instance, config,
                     EvaluateStrategy(instance, played).remaining);
}

std::vector<double> MarginalRateBreakpoints(const AdInstance& instance,
                                            const Configuration& config,
                                            const AllocationStrategy& prefix) {
  const auto rem = EvaluateStrategy(instance, prefix).remaining;
  const auto rates = SpendRates(instance, config);
  std::vector<double> out;
  for (std::size_t i = 0; i < rem.size(); ++i) {
    if (rem[i] > 0.0 && rates[i] > 0.0) out.push_back(rem[i] / rates[i]);
  }
  SortUnique(out);
  return out;
}

Configuration BestConfiguration(const AdInstance& instance,
                                const BudgetVector& remaining) {
  CheckBudgetVector(instance, remaining);
  std::vector<std::vector<std::size_t>> assignment(instance.num_types());
  for (std::size_t j = 0; j < instance.num_types(); ++j) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < instance.num_ads(); ++i) {
      if (remaining[i] > kExhaustedBudget && instance.bid(i, j) > 0.0) {
        candidates.push_back(i);
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [&](std::size_t a, std::size_t b) {
                       return instance.bid(a, j) > instance.bid(b, j);
                     });
    const auto keep = std::min<std::size_t>(candidates.size(),
                                            static_cast<std::size_t>(
                                                instance.slots()));
    candidates.resize(keep);
    assignment[j] = std::move(candidates);
  }
  return Configuration(instance, std::move(assignment));
}

namespace {

// One greedy step. Once no configuration earns anything the last one is
// kept to the horizon and `idle` is set.
Increment<Configuration> ExhaustionStep(const AdInstance& instance,
                                        const AllocationStrategy& prefix,
                                        bool* idle) {
  const auto rem = EvaluateStrategy(instance, prefix).remaining;
  Configuration best = BestConfiguration(instance, rem);
  if (RevenueRate(instance, best, rem) == 0.0) {
    if (idle != nullptr) *idle = true;
    if (!prefix.empty()) return {prefix.segments().back().action, kInf};
    return {std::move(best), kInf};
  }
  const auto rates = SpendRates(instance, best);
  double hold = kInf;
  for (std::size_t i = 0; i < rem.size(); ++i) {
    if (rem[i] > 0.0 && rates[i] > 0.0) hold = std::min(hold, rem[i] / rates[i]);
  }
  return {std::move(best), hold};
}

}  // namespace

ContinuousOracle<Configuration> ExhaustionOracle(const AdInstance& instance) {
  return [&instance](const AllocationStrategy& prefix) {
    return ExhaustionStep(instance, prefix, nullptr);
  };
}

GreedyAllocation GreedyAllocate(const AdInstance& instance) {
  GreedyAllocation out;
  bool idle = false;
  const ContinuousOracle<Configuration> oracle =
      [&](const AllocationStrategy& prefix) {
        return ExhaustionStep(instance, prefix, &idle);
      };
  // Each non-final segment ends with at least one exhaustion.
  const std::size_t cap = instance.num_ads() + 2;
  out.strategy = GreedyContinuous(oracle, instance.horizon(), cap);
  out.ledger = EvaluateStrategy(instance, out.strategy);
  out.padded = idle;
  const std::size_t n = out.strategy.segments().size();
  out.configuration_changes = n > 0 ? n - 1 : 0;
  return out;
}

SequenceFunction<AllocationStrategy> StrategyUtility(const AdInstance& instance) {
  return [&instance](const AllocationStrategy& s) {
    return EvaluateStrategy(instance, s).utility;
  };
}

RateModel<Configuration> AdRateModel(const AdInstance& instance) {
  RateModel<Configuration> model;
  model.utility = StrategyUtility(instance);
  model.rate = [&instance](const AllocationStrategy& prefix,
                           const Configuration& s, double delta) {
    return MarginalRate(instance, s, delta, prefix);
  };
  model.breakpoints = [&instance](const AllocationStrategy& prefix,
                                  const Configuration& s) {
    return MarginalRateBreakpoints(instance, s, prefix);
  };
  return model;
}

double BestMarginalRate(const AdInstance& instance,
                        const AllocationStrategy& prefix) {
  const auto rem = EvaluateStrategy(instance, prefix).remaining;
  return RevenueRate(instance, BestConfiguration(instance, rem), rem);
}

Configuration RandomConfiguration(const AdInstance& instance,
                                  std::mt19937_64& rng) {
  const std::size_t m = instance.num_ads();
  const std::size_t max_k =
      std::min<std::size_t>(m, static_cast<std::size_t>(instance.slots()));
  std::uniform_int_distribution<std::size_t> count(0, max_k);
  std::vector<std::vector<std::size_t>> assignment(instance.num_types());
  std::vector<std::size_t> ads(m);
  for (auto& q : assignment) {
    std::iota(ads.begin(), ads.end(), std::size_t{0});
    std::shuffle(ads.begin(), ads.end(), rng);
    q.assign(ads.begin(), ads.begin() + static_cast<std::ptrdiff_t>(count(rng)));
    std::sort(q.begin(), q.end());
  }
  return Configuration(instance, std::move(assignment));
}

AllocationStrategy RandomStrategy(const AdInstance& instance,
                                  std::mt19937_64& rng, std::size_t max_segments,
                                  double max_length) {
  std::uniform_int_distribution<std::size_t> count(0, max_segments);
  const std::size_t k = count(rng);
  AllocationStrategy out;
  if (k == 0 || !(max_length > 0.0)) return out;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double total = max_length * (0.05 + 0.95 * unit(rng));
  std::vector<double> weights(k);
  double sum = 0.0;
  for (auto& w : weights) {
    w = 0.05 + unit(rng);
    sum += w;
  }
  for (std::size_t s = 0; s < k; ++s) {
    out.Append(RandomConfiguration(instance, rng), total * weights[s] / sum);
  }
  return out;
}

}  // namespace seqsub
