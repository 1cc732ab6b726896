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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "seqsub/rational_lp.h"
#include "test_util.h"

namespace seqsub {
namespace {

using testing::MakeI3;

// Single-type optimum as an LP over z_i:
//   z_i <= cap_i, z_i <= q p_i T, sum z_i / p_i <= d q T.
double SingleTypeLpRef(const AdInstance& inst, std::size_t j,
                       const std::vector<bool>& allowed, const BudgetVector& caps,
                       double horizon) {
  std::vector<std::size_t> vars;
  for (std::size_t i = 0; i < inst.num_ads(); ++i) {
    if (allowed[i] && inst.bid(i, j) > 0.0) vars.push_back(i);
  }
  const std::size_t n = vars.size();
  std::vector<mpq_class> c(n, 1);
  std::vector<std::vector<mpq_class>> a;
  std::vector<mpq_class> b;
  const mpq_class q = ExactRational(inst.prob(j));
  const mpq_class t = ExactRational(horizon);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<mpq_class> row(n, 0);
    row[k] = 1;
    a.push_back(row);
    b.push_back(ExactRational(caps[vars[k]]));
    a.push_back(row);
    b.push_back(q * ExactRational(inst.bid(vars[k], j)) * t);
  }
  std::vector<mpq_class> time(n);
  for (std::size_t k = 0; k < n; ++k) {
    time[k] = 1 / ExactRational(inst.bid(vars[k], j));
  }
  a.push_back(time);
  b.push_back(mpq_class(inst.slots()) * q * t);
  return testing::VertexEnumerationLp(c, a, b).get_d();
}

TEST(RewriteInstanceTest, Validation) {
  const AdInstance base = testing::MakeI1();
  EXPECT_THROW(RewriteInstance(base, {{"r", {0}}}, 0), InstanceError);
  EXPECT_THROW(RewriteInstance(base, {{"r", {}}}, 1), InstanceError);
  EXPECT_THROW(RewriteInstance(base, {{"r", {0}}, {"r", {1}}}, 1),
               InstanceError);
  const RewriteInstance clamped(base, {{"r", {0}}}, 3);
  EXPECT_EQ(clamped.k(), 1u);
  EXPECT_TRUE(clamped.k_clamped());
}

TEST(SingleTypeAllocateTest, I3Examples) {
  const RewriteInstance inst = MakeI3(2);
  const AdInstance& base = inst.base();
  const auto only_a1 = SingleTypeAllocate(base, 0, {true, false},
                                          base.Budgets(), 1.0);
  EXPECT_NEAR(only_a1.spent[0], 0.4, 1e-12);
  EXPECT_NEAR(only_a1.utility, 0.4, 1e-12);

  const auto both = SingleTypeAllocate(base, 0, {true, true}, base.Budgets(), 1.0);
  EXPECT_NEAR(both.spent[0], 0.4, 1e-12);
  EXPECT_NEAR(both.spent[1], 0.3, 1e-12);
  EXPECT_NEAR(both.utility, 0.7, 1e-12);

  const auto none = SingleTypeAllocate(base, 0, {false, false}, base.Budgets(), 1.0);
  EXPECT_EQ(none.utility, 0.0);
}

TEST(SingleTypeAllocateTest, MatchesSingleTypeLp) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const AdInstance inst = testing::RandomSmallAdInstance(rng);
    const std::size_t j = std::uniform_int_distribution<std::size_t>(
        0, inst.num_types() - 1)(rng);
    std::vector<bool> allowed(inst.num_ads());
    BudgetVector caps(inst.num_ads());
    for (std::size_t i = 0; i < inst.num_ads(); ++i) {
      allowed[i] = unit(rng) < 0.8;
      caps[i] = unit(rng) < 0.5 ? inst.budget(i) : unit(rng) * inst.budget(i);
    }
    const auto ledger =
        SingleTypeAllocate(inst, j, allowed, caps, inst.horizon());
    EXPECT_NEAR(ledger.utility,
                SingleTypeLpRef(inst, j, allowed, caps, inst.horizon()), 1e-9);
    for (std::size_t i = 0; i < inst.num_ads(); ++i) {
      EXPECT_LE(ledger.spent[i], caps[i] + 1e-9);
      if (!allowed[i]) EXPECT_EQ(ledger.spent[i], 0.0);
    }
  }
}

TEST(EvaluatePlanTest, Examples) {
  const RewriteInstance inst = MakeI3(2);
  const BudgetVector full = inst.base().Budgets();
  const auto r2 = EvaluatePlan(inst, RewritePlan({{0, {1}, full}}));
  EXPECT_NEAR(r2.utility, 0.5, 1e-12);
  const auto both = EvaluatePlan(inst, RewritePlan({{0, {0, 1}, full}}));
  EXPECT_NEAR(both.utility, 0.7, 1e-12);
  const auto empty = EvaluatePlan(inst, RewritePlan{});
  EXPECT_EQ(empty.utility, 0.0);
  EXPECT_EQ(empty.remaining, full);
}

TEST(EvaluatePlanTest, FlagsDuplicateTypes) {
  const RewriteInstance inst = MakeI3(2);
  const BudgetVector full = inst.base().Budgets();
  const auto ev = EvaluatePlan(inst, RewritePlan({{0, {0}, full}, {0, {1}, full}}));
  EXPECT_TRUE(ev.duplicate_types);
  EXPECT_NEAR(ev.utility, 0.4 + 0.5, 1e-12);
}

TEST(EvaluatePlanTest, RejectsBadTuples) {
  const RewriteInstance inst = MakeI3(2);
  EXPECT_THROW(EvaluatePlan(inst, RewritePlan({{3, {0}, {1, 1}}})),
               InstanceError);
  EXPECT_THROW(EvaluatePlan(inst, RewritePlan({{0, {9}, {1, 1}}})),
               InstanceError);
  EXPECT_THROW(EvaluatePlan(inst, RewritePlan({{0, {0}, {-1, 1}}})),
               InstanceError);
}

TEST(EvaluatePlanTest, BudgetFeasibility) {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 300; ++trial) {
    const RewriteInstance inst = testing::RandomSmallRewriteInstance(rng);
    const auto plan = RandomPlan(inst, rng, 5);
    const auto ev = EvaluatePlan(inst, plan);
    for (std::size_t i = 0; i < inst.base().num_ads(); ++i) {
      double total = 0.0;
      for (const auto& c : ev.consumed) total += c[i];
      EXPECT_LE(total, inst.base().budget(i) + 1e-9);
      EXPECT_NEAR(ev.remaining[i], inst.base().budget(i) - total, 1e-9);
    }
  }
}

TEST(GreedyRewriteTest, I3) {
  const auto k1 = GreedyRewrite(MakeI3(1));
  ASSERT_EQ(k1.plan.Length(), 1u);
  EXPECT_EQ(k1.plan.items()[0].rewrites, std::vector<std::size_t>({1}));
  EXPECT_NEAR(k1.utility, 0.5, 1e-12);

  const auto k2 = GreedyRewrite(MakeI3(2));
  ASSERT_EQ(k2.plan.Length(), 1u);
  std::vector<std::size_t> ys = k2.plan.items()[0].rewrites;
  std::sort(ys.begin(), ys.end());
  EXPECT_EQ(ys, std::vector<std::size_t>({0, 1}));
  EXPECT_NEAR(k2.utility, 0.7, 1e-12);
}

TEST(GreedyRewriteTest, ZeroBidsCoverAllTypes) {
  const AdInstance base({{"a1", 1.0}}, {{"t1", 0.5}, {"t2", 0.5}}, {{0.0, 0.0}},
                        1, 1.0);
  const RewriteInstance inst(base, {{"r1", {0}}}, 1);
  const auto g = GreedyRewrite(inst);
  EXPECT_EQ(g.utility, 0.0);
  EXPECT_EQ(g.plan.Length(), 2u);
}

TEST(GreedyRewriteTest, PlanInvariants) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 200; ++trial) {
    const RewriteInstance inst = testing::RandomSmallRewriteInstance(rng);
    const auto g = GreedyRewrite(inst);
    // Each type once, at most k rewrites each.
    std::vector<int> seen(inst.base().num_types(), 0);
    for (const auto& t : g.plan.items()) {
      ++seen[t.query_type];
      EXPECT_LE(t.rewrites.size(), inst.k());
    }
    for (int s : seen) EXPECT_EQ(s, 1);
    // The recorded consumption caps reproduce the same utility.
    const auto ev = EvaluatePlan(inst, g.plan);
    EXPECT_NEAR(ev.utility, g.utility, 1e-9);
    for (std::size_t i = 0; i < ev.remaining.size(); ++i) {
      EXPECT_NEAR(ev.remaining[i], g.remaining[i], 1e-9);
    }
  }
}

// Each inner-greedy pick beats every unchosen rewrite at that step.
TEST(GreedyRewriteSetTest, PicksAreLocalMaxima) {
  std::mt19937_64 rng(44);
  for (int trial = 0; trial < 200; ++trial) {
    const RewriteInstance inst = testing::RandomSmallRewriteInstance(rng);
    const BudgetVector rem = inst.base().Budgets();
    for (std::size_t j = 0; j < inst.base().num_types(); ++j) {
      const auto ys = GreedyRewriteSet(inst, j, rem);
      std::vector<std::size_t> partial;
      for (std::size_t pick : ys) {
        auto with = partial;
        with.push_back(pick);
        const double chosen = RewriteSetGain(inst, j, with, rem);
        for (std::size_t r = 0; r < inst.num_rewrites(); ++r) {
          if (std::find(partial.begin(), partial.end(), r) != partial.end()) {
            continue;
          }
          auto alt = partial;
          alt.push_back(r);
          EXPECT_GE(chosen, RewriteSetGain(inst, j, alt, rem) - 1e-9);
        }
        partial.push_back(pick);
      }
    }
  }
}

TEST(BestTupleGainTest, DominatesRandomTuples) {
  std::mt19937_64 rng(45);
  for (int trial = 0; trial < 200; ++trial) {
    const RewriteInstance inst = testing::RandomSmallRewriteInstance(rng);
    const auto prefix = RandomPlan(inst, rng, 3);
    const double best = BestTupleGain(inst, prefix);
    const auto u = PlanUtility(inst);
    for (int k = 0; k < 5; ++k) {
      RewritePlan one;
      one.Append(RandomPartialAllocation(inst, rng));
      EXPECT_GE(best, MarginalValue(u, one, prefix) - 1e-9);
    }
  }
}

}  // namespace
}  // namespace seqsub
