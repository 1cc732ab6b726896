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

// Generic greedy drivers for sequence functions.
//
// GreedyDiscrete appends, T times, the action chosen by an incremental oracle
// for the current prefix. With an oracle of quality alpha the result is within
// 1 - e^{-alpha} of the best length-T sequence whenever u is non-decreasing
// and sequence-submodular.
//
// GreedyContinuous repeatedly asks a problem-specific oracle for an action and
// a hold duration during which that action keeps (alpha-approximately) the
// largest marginal rate, until the horizon is filled. Consecutive increments
// with the same action come back as one segment.

#ifndef SEQSUB_GREEDY_H_
#define SEQSUB_GREEDY_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqsub/sequence.h"

namespace seqsub {

template <typename Action>
using DiscreteFunction = SequenceFunction<DiscreteSequence<Action>>;

// Chooses the next action for `prefix`.
template <typename Action>
using IncrementOracle = std::function<Action(
    const DiscreteFunction<Action>& u, const ActionSet<Action>& actions,
    const DiscreteSequence<Action>& prefix)>;

// Marginal u(s|prefix) of every action, in ActionSet order.
template <typename Action>
std::vector<double> SingleStepMarginals(const DiscreteFunction<Action>& u,
                                        const ActionSet<Action>& actions,
                                        const DiscreteSequence<Action>& prefix) {
  const double base = u(prefix);
  std::vector<double> out;
  out.reserve(actions.size());
  for (const auto& s : actions.actions()) {
    DiscreteSequence<Action> next = prefix;
    next.Append(s);
    out.push_back(u(next) - base);
  }
  return out;
}

// Exact argmax; ties go to the first action in ActionSet order.
template <typename Action>
IncrementOracle<Action> ExactIncrementOracle() {
  return [](const DiscreteFunction<Action>& u, const ActionSet<Action>& actions,
            const DiscreteSequence<Action>& prefix) {
    const auto gains = SingleStepMarginals(u, actions, prefix);
    std::size_t best = 0;
    for (std::size_t i = 1; i < gains.size(); ++i) {
      if (gains[i] > gains[best]) best = i;
    }
    return actions[best];
  };
}

// An alpha-approximate oracle that returns the *weakest* admissible action:
// the one with the smallest marginal among those reaching alpha * max.
template <typename Action>
IncrementOracle<Action> WeakestAdmissibleOracle(OracleQuality quality) {
  return [alpha = quality.alpha()](const DiscreteFunction<Action>& u,
                                   const ActionSet<Action>& actions,
                                   const DiscreteSequence<Action>& prefix) {
    const auto gains = SingleStepMarginals(u, actions, prefix);
    double best = gains[0];
    for (double g : gains) best = std::max(best, g);
    const double floor = alpha * best;
    std::size_t pick = actions.size();
    for (std::size_t i = 0; i < gains.size(); ++i) {
      if (gains[i] + 1e-12 >= floor &&
          (pick == actions.size() || gains[i] < gains[pick])) {
        pick = i;
      }
    }
    return actions[pick];
  };
}

template <typename Action>
DiscreteSequence<Action> GreedyDiscrete(
    const DiscreteFunction<Action>& u, const ActionSet<Action>& actions,
    std::size_t horizon,
    const IncrementOracle<Action>& oracle = ExactIncrementOracle<Action>()) {
  DiscreteSequence<Action> h;
  for (std::size_t i = 0; i < horizon; ++i) {
    Action next = oracle(u, actions, h);
    if (!actions.Contains(next)) {
      throw SequenceError("incremental oracle returned an action outside S");
    }
    h.Append(std::move(next));
  }
  return h;
}

// ---------------------------------------------------------------------------

class SegmentLimitError : public std::runtime_error {
 public:
  explicit SegmentLimitError(std::size_t cap)
      : std::runtime_error("greedy_continuous exceeded " + std::to_string(cap) +
                           " segments before reaching the horizon") {}
};

// One oracle answer: play `action` for up to `hold` time units (may be +inf).
template <typename Action>
struct Increment {
  Action action;
  double hold = std::numeric_limits<double>::infinity();
};

template <typename Action>
using ContinuousOracle =
    std::function<Increment<Action>(const TimedSequence<Action>& prefix)>;

// Default segment cap for an action set of the given size.
inline std::size_t DefaultSegmentCap(std::size_t num_actions) {
  return 10 * num_actions;
}

template <typename Action>
TimedSequence<Action> GreedyContinuous(const ContinuousOracle<Action>& oracle,
                                       double horizon,
                                       std::size_t max_segments) {
  if (horizon < 0.0) throw SequenceError("horizon must be non-negative");
  TimedSequence<Action> h;
  double t = 0.0;
  std::size_t segments = 0;
  while (horizon - t > kLengthTolerance) {
    if (segments == max_segments) throw SegmentLimitError(max_segments);
    Increment<Action> inc = oracle(h);
    if (!(inc.hold > 0.0)) {
      throw SequenceError("continuous oracle returned a non-positive hold");
    }
    const double dt = std::min(inc.hold, horizon - t);
    h.Append(std::move(inc.action), dt);
    t += dt;
    ++segments;
  }
  return TimedSequence<Action>(Normalize(h));
}

}  // namespace seqsub

#endif  // SEQSUB_GREEDY_H_
