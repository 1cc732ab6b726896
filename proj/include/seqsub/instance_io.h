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

// JSON instance files and JSON views of strategies and plans.
//
// Instance schema:
//   {"ads": [{"id": str, "budget": num}, ...],
//    "query_types": [{"id": str, "prob": num}, ...],
//    "bids": {ad_id: {type_id: num}},        // missing entries mean 0
//    "slots": int, "horizon": num,
//    "rewrites": [{"id": str, "ads": [ad_id, ...]}],   // optional
//    "k": int}                                          // with rewrites

#ifndef SEQSUB_INSTANCE_IO_H_
#define SEQSUB_INSTANCE_IO_H_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "seqsub/ad_alloc.h"
#include "seqsub/query_rewrite.h"

namespace seqsub {

using Json = nlohmann::json;

// Both throw InstanceError naming the offending field.
AdInstance ParseAdInstance(const Json& doc);
RewriteInstance ParseRewriteInstance(const Json& doc);

struct LoadedInstance {
  AdInstance ads;
  std::optional<RewriteInstance> rewrite;  // present when "rewrites" is
  std::string digest;                      // sha256 of the file bytes
};

// Throws InstanceError (field "file") when the file is unreadable or not JSON.
LoadedInstance LoadInstance(const std::string& path);

Json AdInstanceToJson(const AdInstance& instance);
Json RewriteInstanceToJson(const RewriteInstance& instance);

Json ConfigurationToJson(const AdInstance& instance, const Configuration& c);
Json StrategyToJson(const AdInstance& instance, const AllocationStrategy& s);
Json PlanToJson(const RewriteInstance& instance, const RewritePlan& plan);
Json BudgetsToJson(const AdInstance& instance, const BudgetVector& b);

std::string Sha256Hex(std::string_view bytes);

}  // namespace seqsub

#endif  // SEQSUB_INSTANCE_IO_H_
