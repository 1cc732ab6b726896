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

#include "seqsub/commands.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <stdexcept>
#include <utility>

#include "seqsub/ad_alloc.h"
#include "seqsub/checks.h"
#include "seqsub/oracle.h"
#include "seqsub/parallel.h"
#include "seqsub/query_rewrite.h"
#include "seqsub/stoch_sim.h"

namespace seqsub {
namespace {

constexpr std::size_t kMaxWitnesses = 5;

const double kAllocateBound = 1.0 - std::exp(-1.0);
const double kRewriteBound = 1.0 - std::exp(-(1.0 - std::exp(-1.0)));

Json Header(const std::string& command, const std::string& digest) {
  return {{"command", command}, {"instance_digest", digest}};
}

// Runs `body`, mapping the error taxonomy onto exit codes.
CommandResult Guarded(const std::function<CommandResult()>& body) {
  try {
    return body();
  } catch (const InstanceError& e) {
    return {kExitInputError, Json{{"error", e.what()}, {"field", e.field()}},
            e.what()};
  } catch (const OracleGuardError& e) {
    return {kExitOracleGuard,
            Json{{"error", e.what()},
                 {"measured", e.measured()},
                 {"limit", e.limit()}},
            e.what()};
  } catch (const std::invalid_argument& e) {
    return {kExitInputError, Json{{"error", e.what()}}, e.what()};
  }
}

double Ratio(double achieved, double optimum) {
  return optimum > 0.0 ? achieved / optimum : 1.0;
}

template <typename Seq, typename SeqJson>
Json CheckToJson(const CheckReport<Seq>& report, const SeqJson& seq_json) {
  Json witnesses = Json::array();
  for (std::size_t k = 0;
       k < std::min(kMaxWitnesses, report.violations.size()); ++k) {
    const auto& v = report.violations[k];
    witnesses.push_back({{"property", v.property},
                         {"sample", v.sample},
                         {"a", seq_json(v.a)},
                         {"b", seq_json(v.b)},
                         {"c", seq_json(v.c)},
                         {"lhs", v.lhs},
                         {"rhs", v.rhs},
                         {"gap", v.gap},
                         {"delta", v.delta},
                         {"delta2", v.delta2}});
  }
  return {{"samples", report.samples_tested},
          {"points", report.points_checked},
          {"violations", report.violations.size()},
          {"witnesses", std::move(witnesses)}};
}

}  // namespace

std::string SerializeReport(const Json& report) { return report.dump(2) + "\n"; }

CommandResult RunAllocate(const AllocateOptions& opts) {
  return Guarded([&] {
    const LoadedInstance loaded = LoadInstance(opts.instance);
    const AdInstance& instance = loaded.ads;
    const GreedyAllocation greedy = GreedyAllocate(instance);

    Json outputs;
    outputs["utility"] = greedy.ledger.utility;
    outputs["strategy"] = StrategyToJson(instance, greedy.strategy);
    outputs["breakpoints"] = greedy.ledger.breakpoints;
    outputs["spent"] = BudgetsToJson(instance, greedy.ledger.spent);
    outputs["configuration_changes"] = greedy.configuration_changes;
    outputs["padded"] = greedy.padded;

    CommandResult result;
    if (opts.oracle) {
      try {
        const FluidLpResult lp = LpOptFluid(instance);
        outputs["oracle"] = {{"value", lp.value},
                             {"exact", lp.exact_value},
                             {"method", lp.method}};
        outputs["ratio"] = Ratio(greedy.ledger.utility, lp.value);
        outputs["ratio_bound"] = kAllocateBound;
      } catch (const OracleGuardError& e) {
        outputs["oracle"] = {{"error", e.what()}};
        result.exit_code = kExitOracleGuard;
        result.message = e.what();
      }
    }
    result.report = Header("allocate", loaded.digest);
    result.report["outputs"] = std::move(outputs);
    return result;
  });
}

CommandResult RunRewrite(const RewriteOptions& opts) {
  return Guarded([&] {
    const LoadedInstance loaded = LoadInstance(opts.instance);
    if (!loaded.rewrite) {
      throw InstanceError("rewrites", "missing required field");
    }
    const RewriteInstance& instance = *loaded.rewrite;
    const RewriteResult greedy = GreedyRewrite(instance);

    CommandResult result;
    Json outputs;
    outputs["utility"] = greedy.utility;
    outputs["plan"] = PlanToJson(instance, greedy.plan);
    outputs["remaining"] = BudgetsToJson(instance.base(), greedy.remaining);
    outputs["k"] = instance.k();
    if (instance.k_clamped()) {
      outputs["warnings"] = Json::array({"k exceeds the number of rewrites; "
                                         "clamped to " +
                                         std::to_string(instance.k())});
      result.message = "warning: k clamped to " + std::to_string(instance.k());
    }
    if (opts.oracle) {
      try {
        const auto opt = BruteForceRewriteOpt(instance);
        Json witness = Json::object();
        for (std::size_t j = 0; j < opt.witness.rewrites.size(); ++j) {
          Json rws = Json::array();
          for (std::size_t r : opt.witness.rewrites[j]) {
            rws.push_back(instance.rewrites()[r].id);
          }
          witness[instance.base().query_type(j).id] = std::move(rws);
        }
        outputs["oracle"] = {{"value", opt.value},
                             {"witness", std::move(witness)},
                             {"method", opt.method}};
        outputs["ratio"] = Ratio(greedy.utility, opt.value);
        outputs["ratio_bound"] = kRewriteBound;
      } catch (const OracleGuardError& e) {
        outputs["oracle"] = {{"error", e.what()}};
        result.exit_code = kExitOracleGuard;
        result.message = e.what();
      }
    }
    result.report = Header("rewrite", loaded.digest);
    result.report["outputs"] = std::move(outputs);
    return result;
  });
}

CommandResult RunSimulate(const SimulateOptions& opts) {
  return Guarded([&] {
    if (opts.trials == 0) throw std::invalid_argument("--trials must be >= 1");
    const LoadedInstance loaded = LoadInstance(opts.instance);
    const AdInstance& instance = loaded.ads;
    const GreedyAllocation greedy = GreedyAllocate(instance);
    const SimResult sim = SimulateStream(
        instance, greedy.strategy, {opts.seed, opts.trials, opts.queries});

    Json outputs;
    outputs["mean"] = sim.mean;
    outputs["std"] = sim.std;
    outputs["fluid"] = sim.fluid;
    outputs["trials"] = opts.trials;
    outputs["seed"] = opts.seed;
    outputs["query_count"] = sim.query_count;
    outputs["relative_gap"] =
        sim.fluid > 0.0 ? std::abs(sim.mean - sim.fluid) / sim.fluid : 0.0;
    if (opts.per_trial) outputs["per_trial"] = sim.per_trial;

    CommandResult result;
    result.report = Header("simulate", loaded.digest);
    result.report["seed"] = opts.seed;
    result.report["rng"] = kRngAlgorithm;
    result.report["outputs"] = std::move(outputs);
    return result;
  });
}

CommandResult RunVerify(const VerifyOptions& opts) {
  return Guarded([&] {
    static const std::vector<std::string> kKnown = {"mono", "submod", "deriv",
                                                    "lemma1"};
    for (const auto& c : opts.checks) {
      if (std::find(kKnown.begin(), kKnown.end(), c) == kKnown.end()) {
        throw std::invalid_argument("unknown check '" + c + "'");
      }
    }
    if (opts.samples == 0) throw std::invalid_argument("--samples must be >= 1");
    const auto wants = [&](const char* name) {
      return std::find(opts.checks.begin(), opts.checks.end(), name) !=
             opts.checks.end();
    };

    const LoadedInstance loaded = LoadInstance(opts.instance);
    const AdInstance& instance = loaded.ads;
    const double half = instance.horizon() / 2.0;
    const CheckOptions base{opts.samples, opts.seed, 1e-9};

    const SequenceGenerator<AllocationStrategy> gen_strategy =
        [&](std::mt19937_64& rng) {
          return RandomStrategy(instance, rng, 4, half);
        };
    const auto strategy_json = [&](const AllocationStrategy& s) {
      return StrategyToJson(instance, s);
    };
    const auto ad_u = StrategyUtility(instance);

    Json checks = Json::object();
    bool violated = false;
    const auto record = [&](const std::string& name, const std::string& model,
                            Json summary) {
      if (summary["violations"].get<std::size_t>() > 0) violated = true;
      checks[name][model] = std::move(summary);
    };

    std::optional<SequenceGenerator<RewritePlan>> gen_plan;
    std::function<Json(const RewritePlan&)> plan_json;
    std::optional<SequenceFunction<RewritePlan>> plan_u;
    if (loaded.rewrite) {
      const RewriteInstance& rw = *loaded.rewrite;
      const std::size_t max_tuples = rw.base().num_types() + 1;
      gen_plan = [&rw, max_tuples](std::mt19937_64& rng) {
        return RandomPlan(rw, rng, max_tuples);
      };
      plan_json = [&rw](const RewritePlan& p) { return PlanToJson(rw, p); };
      plan_u = PlanUtility(rw);
    }

    if (wants("mono")) {
      record("mono", "ad",
             CheckToJson(CheckNondecreasing(ad_u, gen_strategy, base),
                         strategy_json));
      if (gen_plan) {
        record("mono", "rewrite",
               CheckToJson(CheckNondecreasing(*plan_u, *gen_plan, base),
                           plan_json));
      }
    }
    if (wants("submod")) {
      record("submod", "ad",
             CheckToJson(CheckSubmodular(ad_u, gen_strategy, gen_strategy, base),
                         strategy_json));
      if (gen_plan) {
        record("submod", "rewrite",
               CheckToJson(
                   CheckSubmodular(*plan_u, *gen_plan, *gen_plan, base),
                   plan_json));
      }
    }
    if (wants("deriv")) {
      DerivativeOptions dopts;
      dopts.base = base;
      dopts.max_delta = half;
      const std::function<Configuration(std::mt19937_64&)> gen_config =
          [&](std::mt19937_64& rng) { return RandomConfiguration(instance, rng); };
      record("deriv", "ad",
             CheckToJson(CheckDerivativeProps(AdRateModel(instance), gen_strategy,
                                              gen_config, dopts),
                         strategy_json));
    }
    if (wants("lemma1")) {
      const std::function<double(const AllocationStrategy&)> best_rate =
          [&](const AllocationStrategy& a) { return BestMarginalRate(instance, a); };
      record("lemma1", "ad",
             CheckToJson(CheckSingleStepBound(ad_u, best_rate, gen_strategy, gen_strategy,
                                     base),
                         strategy_json));
      if (gen_plan) {
        const RewriteInstance& rw = *loaded.rewrite;
        const std::function<double(const RewritePlan&)> best_tuple =
            [&rw](const RewritePlan& a) { return BestTupleGain(rw, a); };
        record("lemma1", "rewrite",
               CheckToJson(CheckSingleStepBound(*plan_u, best_tuple, *gen_plan, *gen_plan,
                                       base),
                           plan_json));
      }
    }
    if (opts.negative_control) {
      const SequenceFunction<AllocationStrategy> negated =
          [](const AllocationStrategy& s) { return -s.Length(); };
      record("negative_control", "ad",
             CheckToJson(CheckNondecreasing(negated, gen_strategy, base),
                         strategy_json));
    }

    CommandResult result;
    result.exit_code = violated ? kExitViolation : kExitOk;
    result.report = Header("verify", loaded.digest);
    result.report["seed"] = opts.seed;
    result.report["rng"] = kRngAlgorithm;
    result.report["outputs"] = {{"checks", std::move(checks)},
                                {"samples", opts.samples},
                                {"passed", !violated}};
    if (violated) result.message = "property violations found";
    return result;
  });
}

}  // namespace seqsub
