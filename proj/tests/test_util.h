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

// Fixtures, random instance generators and test-only oracles shared by the
// unit and acceptance suites. Nothing here calls into the code it checks
// except to build inputs.

#ifndef SEQSUB_TESTS_TEST_UTIL_H_
#define SEQSUB_TESTS_TEST_UTIL_H_

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "seqsub/ad_alloc.h"
#include "seqsub/oracle.h"
#include "seqsub/query_rewrite.h"

namespace seqsub::testing {

// One ad (B=1), one type (q=1), p=2, d=1, T=1.
inline AdInstance MakeI0() {
  return AdInstance({{"a1", 1.0}}, {{"t1", 1.0}}, {{2.0}}, 1, 1.0);
}

// a1 bids 1 on both types, a2 bids 1 on t1 only; budgets 0.5; q = 0.5 each.
inline AdInstance MakeI1() {
  return AdInstance({{"a1", 0.5}, {"a2", 0.5}}, {{"t1", 0.5}, {"t2", 0.5}},
                    {{1.0, 1.0}, {1.0, 0.0}}, 1, 1.0);
}

// Single type; a1 (p=1, B=0.4), a2 (p=0.5, B=1); r1 -> {a1}, r2 -> {a2}.
inline RewriteInstance MakeI3(int k) {
  AdInstance base({{"a1", 0.4}, {"a2", 1.0}}, {{"t1", 1.0}}, {{1.0}, {0.5}}, 1,
                  1.0);
  return RewriteInstance(std::move(base), {{"r1", {0}}, {"r2", {1}}}, k);
}

// Universe {1,2,3} with unit weights; s1 -> {1,2}, s2 -> {2,3}, s3 -> {3}.
inline CoverageSpec I2Spec() {
  return {{1.0, 1.0, 1.0}, {{0, 1}, {1, 2}, {2}}, {"s1", "s2", "s3"}};
}

inline CoverageSpec RandomCoverageSpec(std::mt19937_64& rng,
                                       std::size_t max_actions = 5,
                                       std::size_t max_elements = 6) {
  std::uniform_int_distribution<std::size_t> na(1, max_actions);
  std::uniform_int_distribution<std::size_t> ne(1, max_elements);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CoverageSpec spec;
  const std::size_t elements = ne(rng);
  for (std::size_t e = 0; e < elements; ++e) spec.weights.push_back(unit(rng));
  const std::size_t actions = na(rng);
  for (std::size_t s = 0; s < actions; ++s) {
    std::vector<std::size_t> cover;
    for (std::size_t e = 0; e < elements; ++e) {
      if (unit(rng) < 0.4) cover.push_back(e);
    }
    spec.covers.push_back(std::move(cover));
  }
  return spec;
}

// Random instance with m ads, n types. Some bids and budgets are zero.
inline AdInstance RandomAdInstance(std::mt19937_64& rng, std::size_t m,
                                   std::size_t n, int slots) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Ad> ads;
  for (std::size_t i = 0; i < m; ++i) {
    const double b = unit(rng) < 0.1 ? 0.0 : 0.05 + unit(rng);
    ads.push_back({"a" + std::to_string(i + 1), b});
  }
  std::vector<double> w(n);
  double sum = 0.0;
  for (auto& x : w) {
    x = 0.05 + unit(rng);
    sum += x;
  }
  std::vector<QueryType> types;
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double q = j + 1 == n ? 1.0 - acc : w[j] / sum;
    acc += q;
    types.push_back({"t" + std::to_string(j + 1), q});
  }
  std::vector<std::vector<double>> bids(m, std::vector<double>(n, 0.0));
  for (auto& row : bids) {
    for (auto& p : row) p = unit(rng) < 0.25 ? 0.0 : 0.1 + 2.0 * unit(rng);
  }
  const double horizon = 0.5 + 1.5 * unit(rng);
  return AdInstance(std::move(ads), std::move(types), std::move(bids), slots,
                    horizon);
}

// m <= 4, n <= 4, d <= 2, m * n <= 12.
inline AdInstance RandomSmallAdInstance(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  std::uniform_int_distribution<int> slots(1, 2);
  std::size_t m = 0, n = 0;
  do {
    m = dim(rng);
    n = dim(rng);
  } while (m * n > 12);
  return RandomAdInstance(rng, m, n, slots(rng));
}

// n <= 3, |R| <= 4, k <= 2, m <= 4.
inline RewriteInstance RandomSmallRewriteInstance(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> ads(1, 4);
  std::uniform_int_distribution<std::size_t> types(1, 3);
  std::uniform_int_distribution<std::size_t> rws(1, 4);
  std::uniform_int_distribution<int> slots(1, 2);
  std::uniform_int_distribution<int> kd(1, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t m = ads(rng);
  AdInstance base = RandomAdInstance(rng, m, types(rng), slots(rng));
  std::vector<Rewrite> rewrites;
  const std::size_t r_count = rws(rng);
  for (std::size_t r = 0; r < r_count; ++r) {
    Rewrite rw{"r" + std::to_string(r + 1), {}};
    for (std::size_t i = 0; i < m; ++i) {
      if (unit(rng) < 0.4) rw.ads.push_back(i);
    }
    if (rw.ads.empty()) {
      rw.ads.push_back(std::uniform_int_distribution<std::size_t>(0, m - 1)(rng));
    }
    rewrites.push_back(std::move(rw));
  }
  return RewriteInstance(std::move(base), std::move(rewrites), kd(rng));
}

// ---------------------------------------------------------------------------
// Test-only oracles.

// Every configuration of the instance (each type: any ordered-irrelevant
// subset of at most `slots` ads), by enumeration.
inline std::vector<Configuration> AllConfigurations(const AdInstance& inst) {
  const std::size_t m = inst.num_ads();
  std::vector<std::vector<std::size_t>> subsets;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<int>(__builtin_popcount(mask)) > inst.slots()) continue;
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < m; ++i) {
      if (mask >> i & 1) s.push_back(i);
    }
    subsets.push_back(std::move(s));
  }
  std::vector<Configuration> out;
  std::vector<std::size_t> pick(inst.num_types(), 0);
  for (;;) {
    std::vector<std::vector<std::size_t>> a;
    for (std::size_t j = 0; j < pick.size(); ++j) a.push_back(subsets[pick[j]]);
    out.emplace_back(inst, std::move(a));
    std::size_t pos = pick.size();
    bool done = true;
    while (pos > 0) {
      --pos;
      if (++pick[pos] < subsets.size()) {
        done = false;
        break;
      }
      pick[pos] = 0;
    }
    if (done) return out;
  }
}

// Closed-form fluid utility without event simulation: with no reassignment,
// each ad's spend is min(B_i, total uncapped load).
inline double LoadFormulaUtility(const AdInstance& inst,
                                 const AllocationStrategy& s) {
  std::vector<double> load(inst.num_ads(), 0.0);
  for (const auto& seg : s.segments()) {
    for (std::size_t j = 0; j < inst.num_types(); ++j) {
      for (std::size_t i : seg.action.ads_for(j)) {
        load[i] += inst.prob(j) * inst.bid(i, j) * seg.duration;
      }
    }
  }
  double u = 0.0;
  for (std::size_t i = 0; i < inst.num_ads(); ++i) {
    u += std::min(inst.budget(i), load[i]);
  }
  return u;
}

// max c.x s.t. A x <= b, x >= 0 by enumerating basic solutions: every choice
// of n tight constraints among the m rows and n bounds, solved exactly.
inline mpq_class VertexEnumerationLp(
    const std::vector<mpq_class>& c,
    const std::vector<std::vector<mpq_class>>& a,
    const std::vector<mpq_class>& b) {
  const std::size_t n = c.size();
  const std::size_t m = a.size();
  // All constraints as g.x <= h, including -x_k <= 0.
  std::vector<std::vector<mpq_class>> g = a;
  std::vector<mpq_class> h = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<mpq_class> row(n, 0);
    row[k] = -1;
    g.push_back(row);
    h.push_back(0);
  }
  const std::size_t total = m + n;
  mpq_class best = 0;
  if (n == 0) return best;
  std::vector<std::size_t> idx(n);
  for (std::size_t k = 0; k < n; ++k) idx[k] = k;
  for (;;) {
    // Solve g[idx] x = h[idx] by Gauss-Jordan.
    std::vector<std::vector<mpq_class>> mat(n, std::vector<mpq_class>(n + 1));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t col = 0; col < n; ++col) mat[r][col] = g[idx[r]][col];
      mat[r][n] = h[idx[r]];
    }
    bool singular = false;
    for (std::size_t col = 0; col < n && !singular; ++col) {
      std::size_t piv = col;
      while (piv < n && sgn(mat[piv][col]) == 0) ++piv;
      if (piv == n) {
        singular = true;
        break;
      }
      std::swap(mat[piv], mat[col]);
      const mpq_class p = mat[col][col];
      for (auto& v : mat[col]) v /= p;
      for (std::size_t r = 0; r < n; ++r) {
        if (r == col || sgn(mat[r][col]) == 0) continue;
        const mpq_class f = mat[r][col];
        for (std::size_t k = 0; k <= n; ++k) mat[r][k] -= f * mat[col][k];
      }
    }
    if (!singular) {
      bool feasible = true;
      for (std::size_t r = 0; r < total && feasible; ++r) {
        mpq_class lhs = 0;
        for (std::size_t k = 0; k < n; ++k) lhs += g[r][k] * mat[k][n];
        if (lhs > h[r]) feasible = false;
      }
      if (feasible) {
        mpq_class v = 0;
        for (std::size_t k = 0; k < n; ++k) v += c[k] * mat[k][n];
        if (v > best) best = v;
      }
    }
    // Next combination.
    std::size_t pos = n;
    while (pos > 0 && idx[pos - 1] == total - n + pos - 1) --pos;
    if (pos == 0) return best;
    ++idx[pos - 1];
    for (std::size_t k = pos; k < n; ++k) idx[k] = idx[k - 1] + 1;
  }
}

}  // namespace seqsub::testing

#endif  // SEQSUB_TESTS_TEST_UTIL_H_
