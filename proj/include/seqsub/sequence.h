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

// Discrete and timed (continuous) sequences over a finite action set, with
// the algebra the greedy drivers and property checkers are built on:
// concatenation, refinement (slicing), domination and marginal values.

#ifndef SEQSUB_SEQUENCE_H_
#define SEQSUB_SEQUENCE_H_

#include <algorithm>
#include <concepts>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

namespace seqsub {

// Thrown on a violated precondition of a sequence operation.
class SequenceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Tolerance used when comparing continuous lengths and cut points.
inline constexpr double kLengthTolerance = 1e-12;

// The finite set S. Order is fixed and used for tie-breaking.
template <typename Action>
class ActionSet {
 public:
  explicit ActionSet(std::vector<Action> actions)
      : actions_(std::move(actions)) {
    if (actions_.empty()) throw SequenceError("ActionSet must be non-empty");
    for (std::size_t i = 0; i < actions_.size(); ++i) {
      for (std::size_t k = i + 1; k < actions_.size(); ++k) {
        if (actions_[i] == actions_[k]) {
          throw SequenceError("ActionSet identifiers must be unique");
        }
      }
    }
  }

  const std::vector<Action>& actions() const { return actions_; }
  std::size_t size() const { return actions_.size(); }
  const Action& operator[](std::size_t i) const { return actions_[i]; }

  bool Contains(const Action& a) const {
    return std::find(actions_.begin(), actions_.end(), a) != actions_.end();
  }

 private:
  std::vector<Action> actions_;
};

template <typename Action>
class DiscreteSequence {
 public:
  using ActionType = Action;

  DiscreteSequence() = default;
  explicit DiscreteSequence(std::vector<Action> items)
      : items_(std::move(items)) {}

  const std::vector<Action>& items() const { return items_; }
  std::size_t Length() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  void Append(Action a) { items_.push_back(std::move(a)); }

  bool operator==(const DiscreteSequence&) const = default;

 private:
  std::vector<Action> items_;
};

template <typename Action>
struct Segment {
  Action action;
  double duration = 0.0;

  bool operator==(const Segment&) const = default;
};

// A finite continuous sequence ((s_1, dt_1), ..., (s_k, dt_k)) with dt_i > 0.
template <typename Action>
class TimedSequence {
 public:
  using ActionType = Action;

  TimedSequence() = default;
  explicit TimedSequence(std::vector<Segment<Action>> segments) {
    for (auto& seg : segments) Append(std::move(seg.action), seg.duration);
  }

  const std::vector<Segment<Action>>& segments() const { return segments_; }
  double Length() const { return length_; }
  bool empty() const { return segments_.empty(); }

  void Append(Action a, double duration) {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
      throw SequenceError("segment durations must be finite and positive");
    }
    segments_.push_back({std::move(a), duration});
    length_ += duration;
  }

  // Action active at time t in [0, Length()); nullptr outside.
  const Action* ActionAt(double t) const {
    if (t < 0.0) return nullptr;
    double start = 0.0;
    for (const auto& seg : segments_) {
      if (t < start + seg.duration) return &seg.action;
      start += seg.duration;
    }
    return nullptr;
  }

  bool operator==(const TimedSequence& o) const {
    return segments_ == o.segments_;
  }

 private:
  std::vector<Segment<Action>> segments_;
  double length_ = 0.0;
};

// ---------------------------------------------------------------------------
// Concatenation A ⊥ B.

template <typename Action>
DiscreteSequence<Action> Concat(const DiscreteSequence<Action>& a,
                                const DiscreteSequence<Action>& b) {
  std::vector<Action> items = a.items();
  items.insert(items.end(), b.items().begin(), b.items().end());
  return DiscreteSequence<Action>(std::move(items));
}

template <typename Action>
TimedSequence<Action> Concat(const TimedSequence<Action>& a,
                             const TimedSequence<Action>& b) {
  TimedSequence<Action> out = a;
  for (const auto& seg : b.segments()) out.Append(seg.action, seg.duration);
  return out;
}

// ---------------------------------------------------------------------------
// Refinement.

// A_[x,y] with 1-based inclusive indices; empty when [x,y] misses [1,k].
template <typename Action>
DiscreteSequence<Action> Slice(const DiscreteSequence<Action>& a,
                               std::int64_t x, std::int64_t y) {
  if (x > y) throw SequenceError("Slice requires x <= y");
  const auto k = static_cast<std::int64_t>(a.Length());
  const std::int64_t first = std::max<std::int64_t>(x, 1);
  const std::int64_t last = std::min<std::int64_t>(y, k);
  if (first > last) return {};
  return DiscreteSequence<Action>(std::vector<Action>(
      a.items().begin() + (first - 1), a.items().begin() + last));
}

// A_[x,y): the portion of `a` inside the half-open window, with the first and
// last overlapped segments shortened by delta and delta' respectively.
template <typename Action>
TimedSequence<Action> Slice(const TimedSequence<Action>& a, double x,
                            double y) {
  if (x > y) throw SequenceError("Slice requires x <= y");
  const double f = std::max(x, 0.0);
  const double l = std::min(y, a.Length());
  TimedSequence<Action> out;
  if (!(f < l)) return out;
  double start = 0.0;
  for (const auto& seg : a.segments()) {
    const double end = start + seg.duration;
    const double lo = std::max(start, f);
    const double hi = std::min(end, l);
    if (hi - lo > kLengthTolerance) out.Append(seg.action, hi - lo);
    start = end;
    if (start >= l) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Equivalence and domination.

// Canonical form: adjacent equal actions merged.
template <typename Action>
std::vector<Segment<Action>> Normalize(const TimedSequence<Action>& a) {
  std::vector<Segment<Action>> out;
  for (const auto& seg : a.segments()) {
    if (!out.empty() && out.back().action == seg.action) {
      out.back().duration += seg.duration;
    } else {
      out.push_back(seg);
    }
  }
  return out;
}

// A ≡ B: equal as functions of time.
template <typename Action>
bool Equivalent(const TimedSequence<Action>& a, const TimedSequence<Action>& b,
                double tol = 1e-9) {
  const auto na = Normalize(a);
  const auto nb = Normalize(b);
  if (na.size() != nb.size()) return false;
  for (std::size_t i = 0; i < na.size(); ++i) {
    if (!(na[i].action == nb[i].action)) return false;
    if (std::abs(na[i].duration - nb[i].duration) > tol) return false;
  }
  return true;
}

// A ≺ B for discrete sequences: A is a subsequence of B.
template <typename Action>
bool IsDominated(const DiscreteSequence<Action>& a,
                 const DiscreteSequence<Action>& b) {
  std::size_t k = 0;
  for (const auto& item : b.items()) {
    if (k < a.Length() && a.items()[k] == item) ++k;
  }
  return k == a.Length();
}

// A ≺ B for timed sequences: A is equivalent to an ordered concatenation of
// disjoint windows of B. Earliest-match scan; `tol` absorbs cut rounding.
template <typename Action>
bool IsDominated(const TimedSequence<Action>& a, const TimedSequence<Action>& b,
                 double tol = 1e-9) {
  const auto na = Normalize(a);
  const auto nb = Normalize(b);
  std::size_t bi = 0;
  double b_left = nb.empty() ? 0.0 : nb[0].duration;
  for (const auto& seg : na) {
    double need = seg.duration;
    while (need > tol) {
      if (bi >= nb.size()) return false;
      if (nb[bi].action == seg.action && b_left > tol) {
        const double take = std::min(need, b_left);
        need -= take;
        b_left -= take;
        if (need <= tol) break;
      }
      ++bi;
      b_left = bi < nb.size() ? nb[bi].duration : 0.0;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Domination sampling.

struct DominationOptions {
  // Maximum number of kept windows for timed sequences.
  int max_windows = 3;
  // Probability of returning B unchanged (A ≡ B) and of returning ∅.
  double keep_all_probability = 0.125;
  double keep_none_probability = 0.125;
};

template <typename Action, std::uniform_random_bit_generator Rng>
DiscreteSequence<Action> SampleDominated(const DiscreteSequence<Action>& b,
                                         Rng& rng,
                                         const DominationOptions& opts = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double roll = unit(rng);
  if (roll < opts.keep_none_probability) return {};
  if (roll < opts.keep_none_probability + opts.keep_all_probability) return b;
  std::bernoulli_distribution keep(0.5);
  DiscreteSequence<Action> out;
  for (const auto& item : b.items()) {
    if (keep(rng)) out.Append(item);
  }
  return out;
}

template <typename Action, std::uniform_random_bit_generator Rng>
TimedSequence<Action> SampleDominated(const TimedSequence<Action>& b, Rng& rng,
                                      const DominationOptions& opts = {}) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double roll = unit(rng);
  if (roll < opts.keep_none_probability || b.empty()) return {};
  if (roll < opts.keep_none_probability + opts.keep_all_probability) return b;
  std::uniform_int_distribution<int> windows(1, std::max(1, opts.max_windows));
  const int m = windows(rng);
  std::uniform_real_distribution<double> coord(0.0, b.Length());
  std::vector<double> cuts(2 * static_cast<std::size_t>(m));
  for (auto& c : cuts) c = coord(rng);
  std::sort(cuts.begin(), cuts.end());
  TimedSequence<Action> out;
  for (int w = 0; w < m; ++w) {
    out = Concat(out, Slice(b, cuts[2 * w], cuts[2 * w + 1]));
  }
  return out;
}

template <typename Seq>
Seq SampleDominated(const Seq& b, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return SampleDominated(b, rng);
}

// ---------------------------------------------------------------------------
// Sequence functions.

template <typename Seq>
using SequenceFunction = std::function<double(const Seq&)>;

// u(b | a) = u(a ⊥ b) - u(a).
template <typename Seq>
double MarginalValue(const SequenceFunction<Seq>& u, const Seq& b,
                     const Seq& a) {
  return u(Concat(a, b)) - u(a);
}

// Approximation quality alpha of an incremental oracle, 0 < alpha <= 1.
class OracleQuality {
 public:
  explicit OracleQuality(double alpha) : alpha_(alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
      throw SequenceError("oracle quality alpha must lie in (0, 1]");
    }
  }
  double alpha() const { return alpha_; }

  // 1 - e^{-alpha}.
  double GreedyBound() const { return 1.0 - std::exp(-alpha_); }

 private:
  double alpha_;
};

}  // namespace seqsub

#endif  // SEQSUB_SEQUENCE_H_
