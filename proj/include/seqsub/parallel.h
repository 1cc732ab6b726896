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

// Deterministic per-index random streams and an index-ordered parallel loop.

#ifndef SEQSUB_PARALLEL_H_
#define SEQSUB_PARALLEL_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>

namespace seqsub {

// Name of the stream construction, pinned in reports.
inline constexpr const char* kRngAlgorithm =
    "mt19937_64 seeded by splitmix64(seed, index)";

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent generator for sample/trial `index` under `seed`.
inline std::mt19937_64 StreamRng(std::uint64_t seed, std::uint64_t index) {
  return std::mt19937_64(SplitMix64(SplitMix64(seed) ^ SplitMix64(~index)));
}

// Worker count: SEQSUB_THREADS if set (0 = auto), else hardware concurrency.
unsigned WorkerCount();

// Runs body(i) for i in [0, n). Bodies must write only to index-owned slots;
// callers reduce in index order afterwards.
void ParallelFor(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace seqsub

#endif  // SEQSUB_PARALLEL_H_
