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

// Exact primal simplex over the rationals for small packing LPs:
//   maximize c.x  subject to  A x <= b,  x >= 0,  with b >= 0.
// The origin is feasible, so no phase one is needed. Bland's rule
// guarantees termination.

#ifndef SEQSUB_RATIONAL_LP_H_
#define SEQSUB_RATIONAL_LP_H_

#include <gmpxx.h>

#include <vector>

namespace seqsub {

struct PackingLp {
  std::vector<mpq_class> objective;               // c, one per variable
  std::vector<std::vector<mpq_class>> rows;       // A
  std::vector<mpq_class> rhs;                     // b >= 0
};

struct LpSolution {
  mpq_class value;
  std::vector<mpq_class> x;
  bool unbounded = false;
};

LpSolution SolvePackingLp(const PackingLp& lp);

// Exact rational value of a finite double.
mpq_class ExactRational(double v);

}  // namespace seqsub

#endif  // SEQSUB_RATIONAL_LP_H_
