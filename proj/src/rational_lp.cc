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

#include "seqsub/rational_lp.h"

#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace seqsub {

mpq_class ExactRational(double v) {
  if (!std::isfinite(v)) throw std::invalid_argument("non-finite LP coefficient");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), v);
  return q;
}

LpSolution SolvePackingLp(const PackingLp& lp) {
  const std::size_t n = lp.objective.size();
  const std::size_t m = lp.rows.size();
  if (lp.rhs.size() != m) throw std::invalid_argument("rhs size mismatch");
  for (const auto& row : lp.rows) {
    if (row.size() != n) throw std::invalid_argument("row size mismatch");
  }
  for (const auto& b : lp.rhs) {
    if (sgn(b) < 0) throw std::invalid_argument("packing LP needs b >= 0");
  }

  // Tableau columns: n structural, m slack, then rhs.
  const std::size_t cols = n + m + 1;
  std::vector<std::vector<mpq_class>> t(m, std::vector<mpq_class>(cols, 0));
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      t[r][c] = lp.rows[r][c];
      t[r][c].canonicalize();
    }
    t[r][n + r] = 1;
    t[r][cols - 1] = lp.rhs[r];
    t[r][cols - 1].canonicalize();
    basis[r] = n + r;
  }
  // Reduced costs row: z_j - c_j; optimal when all >= 0.
  std::vector<mpq_class> z(cols, 0);
  for (std::size_t c = 0; c < n; ++c) {
    z[c] = -lp.objective[c];
    z[c].canonicalize();
  }

  LpSolution sol;
  for (;;) {
    // Bland: lowest-index entering column with negative reduced cost.
    std::size_t enter = cols;
    for (std::size_t c = 0; c + 1 < cols; ++c) {
      if (sgn(z[c]) < 0) {
        enter = c;
        break;
      }
    }
    if (enter == cols) break;
    // Ratio test; ties to the lowest basic variable index.
    std::size_t leave = m;
    mpq_class best_ratio;
    for (std::size_t r = 0; r < m; ++r) {
      if (sgn(t[r][enter]) <= 0) continue;
      mpq_class ratio = t[r][cols - 1] / t[r][enter];
      if (leave == m || ratio < best_ratio ||
          (ratio == best_ratio && basis[r] < basis[leave])) {
        leave = r;
        best_ratio = ratio;
      }
    }
    if (leave == m) {
      sol.unbounded = true;
      return sol;
    }
    const mpq_class pivot = t[leave][enter];
    for (auto& v : t[leave]) v /= pivot;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == leave || sgn(t[r][enter]) == 0) continue;
      const mpq_class f = t[r][enter];
      for (std::size_t c = 0; c < cols; ++c) t[r][c] -= f * t[leave][c];
    }
    if (sgn(z[enter]) != 0) {
      const mpq_class f = z[enter];
      for (std::size_t c = 0; c < cols; ++c) z[c] -= f * t[leave][c];
    }
    basis[leave] = enter;
  }

  sol.x.assign(n, 0);
  for (std::size_t r = 0; r < m; ++r) {
    if (basis[r] < n) sol.x[basis[r]] = t[r][cols - 1];
  }
  sol.value = z[cols - 1];
  return sol;
}

}  // namespace seqsub
