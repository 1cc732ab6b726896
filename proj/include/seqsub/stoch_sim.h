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

// Monte Carlo i.i.d. query streams played against a fixed allocation
// strategy, for comparing discrete arrivals with the fluid model.

#ifndef SEQSUB_STOCH_SIM_H_
#define SEQSUB_STOCH_SIM_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "seqsub/ad_alloc.h"

namespace seqsub {

struct StreamConfig {
  std::uint64_t seed = 0;
  std::size_t trials = 1;
  // Queries per trial; 0 means round(T).
  std::size_t query_count = 0;
};

struct SimResult {
  std::vector<double> per_trial;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  double fluid = 0.0;
  std::size_t query_count = 0;
};

// Query n (0-based) is located at virtual time n * T / query_count and served
// by the configuration active there; every ad in Q_j pays min(p_ij, remaining).
SimResult SimulateStream(const AdInstance& instance,
                         const AllocationStrategy& strategy,
                         const StreamConfig& config);

// Bids divided by `scale`, horizon multiplied by it, budgets unchanged.
AdInstance ScaleInstance(const AdInstance& instance, double scale);

struct ConvergenceRow {
  double scale = 0.0;
  double mean = 0.0;
  double std = 0.0;
  double fluid = 0.0;
  double relative_gap = 0.0;  // |mean - fluid| / fluid, 0 when fluid == 0
};

// Simulates the greedy strategy of each scaled instance.
std::vector<ConvergenceRow> ConvergenceReport(const AdInstance& base,
                                              const std::vector<double>& scales,
                                              std::size_t trials,
                                              std::uint64_t seed);

}  // namespace seqsub

#endif  // SEQSUB_STOCH_SIM_H_
