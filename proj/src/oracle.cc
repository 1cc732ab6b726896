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

#include "seqsub/oracle.h"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <sstream>
#include <utility>

#include "seqsub/rational_lp.h"

namespace seqsub {

std::string OracleGuardError::Format(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

CoverageFixture MakeCoverageFixture(const CoverageSpec& spec) {
  for (double w : spec.weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("coverage weights must be >= 0");
  }
  for (const auto& cover : spec.covers) {
    for (std::size_t e : cover) {
      if (e >= spec.weights.size()) {
        throw std::invalid_argument("coverage element out of range");
      }
    }
  }
  std::vector<int> ids(spec.covers.size());
  for (std::size_t s = 0; s < ids.size(); ++s) ids[s] = static_cast<int>(s);
  auto u = [weights = spec.weights,
            covers = spec.covers](const DiscreteSequence<int>& a) {
    std::vector<bool> covered(weights.size(), false);
    for (int s : a.items()) {
      for (std::size_t e : covers.at(static_cast<std::size_t>(s))) {
        covered[e] = true;
      }
    }
    double total = 0.0;
    for (std::size_t e = 0; e < weights.size(); ++e) {
      if (covered[e]) total += weights[e];
    }
    return total;
  };
  return {std::move(u), ActionSet<int>(std::move(ids))};
}

FluidLpResult LpOptFluid(
    const AdInstance& instance,
    const std::optional<std::vector<std::vector<bool>>>& allowed) {
  const std::size_t m = instance.num_ads();
  const std::size_t n = instance.num_types();
  if (m * n > kLpGuard) {
    throw OracleGuardError("lp_opt_fluid (m*n)", static_cast<double>(m * n),
                           static_cast<double>(kLpGuard));
  }
  // One variable per usable pair.
  std::vector<std::pair<std::size_t, std::size_t>> vars;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (instance.bid(i, j) <= 0.0) continue;
      if (allowed && !(*allowed)[i][j]) continue;
      vars.emplace_back(i, j);
    }
  }
  const mpq_class horizon = ExactRational(instance.horizon());
  const mpq_class slots(instance.slots());

  PackingLp lp;
  lp.objective.assign(vars.size(), 1);
  for (std::size_t i = 0; i < m; ++i) {
    std::vector<mpq_class> row(vars.size(), 0);
    for (std::size_t v = 0; v < vars.size(); ++v) {
      if (vars[v].first == i) row[v] = 1;
    }
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(ExactRational(instance.budget(i)));
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<mpq_class> row(vars.size(), 0);
    for (std::size_t v = 0; v < vars.size(); ++v) {
      if (vars[v].second == j) {
        row[v] = 1 / ExactRational(instance.bid(vars[v].first, j));
      }
    }
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(slots * ExactRational(instance.prob(j)) * horizon);
  }
  for (std::size_t v = 0; v < vars.size(); ++v) {
    const auto [i, j] = vars[v];
    std::vector<mpq_class> row(vars.size(), 0);
    row[v] = 1;
    lp.rows.push_back(std::move(row));
    lp.rhs.push_back(ExactRational(instance.bid(i, j)) *
                     ExactRational(instance.prob(j)) * horizon);
  }

  const LpSolution sol = SolvePackingLp(lp);
  FluidLpResult out;
  out.value = sol.value.get_d();
  out.exact_value = sol.value.get_str();
  out.spend.assign(m, std::vector<double>(n, 0.0));
  for (std::size_t v = 0; v < vars.size(); ++v) {
    out.spend[vars[v].first][vars[v].second] = sol.x[v].get_d();
  }
  return out;
}

OptResult<RewriteAssignment> BruteForceRewriteOpt(
    const RewriteInstance& instance) {
  const auto& base = instance.base();
  const std::size_t r_count = instance.num_rewrites();
  if (r_count > 20) {
    throw OracleGuardError("brute_force_rewrite_opt (|R|)",
                           static_cast<double>(r_count), 20);
  }
  // Rewrite subsets of size <= k, in increasing mask order.
  std::vector<std::uint32_t> subsets;
  for (std::uint32_t mask = 0; mask < (1u << r_count); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) <= instance.k()) {
      subsets.push_back(mask);
    }
  }
  const double size =
      std::pow(static_cast<double>(subsets.size()),
               static_cast<double>(base.num_types()));
  if (size > kRewriteGuard) {
    throw OracleGuardError("brute_force_rewrite_opt", size, kRewriteGuard);
  }
  if (base.num_ads() * base.num_types() > kLpGuard) {
    throw OracleGuardError("brute_force_rewrite_opt (m*n)",
                           static_cast<double>(base.num_ads() * base.num_types()),
                           static_cast<double>(kLpGuard));
  }

  // Reachable-ad mask of every subset; LPs memoized by allowed-pair pattern.
  std::vector<std::uint32_t> reach(subsets.size(), 0);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (std::size_t r = 0; r < r_count; ++r) {
      if (!(subsets[s] >> r & 1)) continue;
      for (std::size_t i : instance.rewrites()[r].ads) reach[s] |= 1u << i;
    }
  }
  std::map<std::vector<std::uint32_t>, double> memo;

  OptResult<RewriteAssignment> best;
  best.method = "enumeration x rational simplex";
  bool first = true;
  const std::size_t n = base.num_types();
  std::vector<std::size_t> choice(n, 0);
  for (;;) {
    std::vector<std::uint32_t> pattern(n);
    for (std::size_t j = 0; j < n; ++j) pattern[j] = reach[choice[j]];
    auto it = memo.find(pattern);
    if (it == memo.end()) {
      std::vector<std::vector<bool>> allowed(base.num_ads(),
                                             std::vector<bool>(n, false));
      for (std::size_t i = 0; i < base.num_ads(); ++i) {
        for (std::size_t j = 0; j < n; ++j) allowed[i][j] = pattern[j] >> i & 1;
      }
      it = memo.emplace(pattern, LpOptFluid(base, allowed).value).first;
    }
    if (first || it->second > best.value) {
      first = false;
      best.value = it->second;
      best.witness.rewrites.assign(n, {});
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t r = 0; r < r_count; ++r) {
          if (subsets[choice[j]] >> r & 1) best.witness.rewrites[j].push_back(r);
        }
      }
    }
    std::size_t pos = n;
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++choice[pos] < subsets.size()) {
        done = false;
        break;
      }
      choice[pos] = 0;
    }
    if (done) break;
  }
  return best;
}

}  // namespace seqsub
