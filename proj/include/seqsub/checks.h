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

// Randomized property checkers for sequence functions: monotonicity under
// domination, sequence-submodularity, derivative properties of the marginal
// rate, and the single-step lower bound on the best local gain.
//
// Every checker draws sample i from StreamRng(seed, i), so results do not
// depend on how samples are scheduled across threads.

#ifndef SEQSUB_CHECKS_H_
#define SEQSUB_CHECKS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "seqsub/parallel.h"
#include "seqsub/sequence.h"

namespace seqsub {

// A failed inequality lhs >= rhs - tol together with its witnesses.
template <typename Seq>
struct Violation {
  std::string property;
  std::uint64_t sample = 0;
  Seq a;
  Seq b;
  Seq c;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;  // rhs - lhs
  double delta = 0.0;
  double delta2 = 0.0;
};

template <typename Seq>
struct CheckReport {
  std::string name;
  std::size_t samples_tested = 0;
  // Inequalities actually evaluated (a sample may evaluate several, or skip
  // one when it cannot be placed away from breakpoints).
  std::size_t points_checked = 0;
  std::vector<Violation<Seq>> violations;

  bool ok() const { return violations.empty(); }
};

struct CheckOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 0;
  double tol = 1e-9;
};

template <typename Seq>
using SequenceGenerator = std::function<Seq(std::mt19937_64&)>;

namespace internal {

template <typename Seq>
struct SampleOutcome {
  std::size_t points = 0;
  std::vector<Violation<Seq>> violations;
};

template <typename Seq>
CheckReport<Seq> RunSamples(
    std::string name, const CheckOptions& opts,
    const std::function<void(std::uint64_t, std::mt19937_64&,
                             SampleOutcome<Seq>&)>& sample) {
  if (opts.samples == 0) throw std::invalid_argument("samples must be >= 1");
  std::vector<SampleOutcome<Seq>> outcomes(opts.samples);
  ParallelFor(opts.samples, [&](std::size_t i) {
    auto rng = StreamRng(opts.seed, i);
    sample(i, rng, outcomes[i]);
  });
  CheckReport<Seq> report;
  report.name = std::move(name);
  report.samples_tested = opts.samples;
  for (auto& o : outcomes) {
    report.points_checked += o.points;
    for (auto& v : o.violations) report.violations.push_back(std::move(v));
  }
  return report;
}

template <typename Seq>
void Expect(SampleOutcome<Seq>& out, const char* property, std::uint64_t i,
            double lhs, double rhs, double tol, const Seq& a, const Seq& b,
            const Seq& c, double delta = 0.0, double delta2 = 0.0) {
  ++out.points;
  if (lhs < rhs - tol || std::isnan(lhs) || std::isnan(rhs)) {
    out.violations.push_back(
        {property, i, a, b, c, lhs, rhs, rhs - lhs, delta, delta2});
  }
}

}  // namespace internal

// Condition 1: u(∅) = 0 and u(A) <= u(B) for sampled A ≺ B.
template <typename Seq>
CheckReport<Seq> CheckNondecreasing(const SequenceFunction<Seq>& u,
                                    const SequenceGenerator<Seq>& gen_b,
                                    const CheckOptions& opts) {
  auto report = internal::RunSamples<Seq>(
      "nondecreasing", opts,
      [&](std::uint64_t i, std::mt19937_64& rng,
          internal::SampleOutcome<Seq>& out) {
        const Seq b = gen_b(rng);
        const Seq a = SampleDominated(b, rng);
        internal::Expect(out, "nondecreasing", i, u(b), u(a), opts.tol, a, b,
                         Seq{});
      });
  const double empty = u(Seq{});
  ++report.points_checked;
  if (std::abs(empty) > opts.tol) {
    report.violations.push_back(
        {"empty_is_zero", 0, Seq{}, Seq{}, Seq{}, 0.0, empty, empty, 0, 0});
  }
  return report;
}

// Condition 2: u(C|A) >= u(C|B) for sampled A ≺ B and arbitrary C.
template <typename Seq>
CheckReport<Seq> CheckSubmodular(const SequenceFunction<Seq>& u,
                                 const SequenceGenerator<Seq>& gen_b,
                                 const SequenceGenerator<Seq>& gen_c,
                                 const CheckOptions& opts) {
  return internal::RunSamples<Seq>(
      "submodular", opts,
      [&](std::uint64_t i, std::mt19937_64& rng,
          internal::SampleOutcome<Seq>& out) {
        const Seq b = gen_b(rng);
        const Seq c = gen_c(rng);
        const Seq a = SampleDominated(b, rng);
        internal::Expect(out, "submodular", i, MarginalValue(u, c, a),
                         MarginalValue(u, c, b), opts.tol, a, b, c);
      });
}

// max_s u(s|A) >= u(B|A) / |B| for sampled A and non-empty B. `best_local`
// returns the left side (for timed sequences, max_s of the marginal rate at 0).
template <typename Seq>
CheckReport<Seq> CheckSingleStepBound(const SequenceFunction<Seq>& u,
                             const std::function<double(const Seq&)>& best_local,
                             const SequenceGenerator<Seq>& gen_a,
                             const SequenceGenerator<Seq>& gen_b,
                             const CheckOptions& opts) {
  return internal::RunSamples<Seq>(
      "lemma1", opts,
      [&](std::uint64_t i, std::mt19937_64& rng,
          internal::SampleOutcome<Seq>& out) {
        const Seq a = gen_a(rng);
        const Seq b = gen_b(rng);
        const double len = static_cast<double>(b.Length());
        if (!(len > 0.0)) return;
        internal::Expect(out, "lemma1", i, best_local(a),
                         MarginalValue(u, b, a) / len, opts.tol, a, b, Seq{});
      });
}

// max_s u(s|A) over a finite action set.
template <typename Action>
std::function<double(const DiscreteSequence<Action>&)> BestSingleStepGain(
    SequenceFunction<DiscreteSequence<Action>> u, ActionSet<Action> actions) {
  return [u = std::move(u),
          actions = std::move(actions)](const DiscreteSequence<Action>& a) {
    const double base = u(a);
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& s : actions.actions()) {
      DiscreteSequence<Action> next = a;
      next.Append(s);
      best = std::max(best, u(next) - base);
    }
    return best;
  };
}

// ---------------------------------------------------------------------------
// Marginal-rate properties for timed sequence functions.

// A continuous sequence function together with its right-derivative
// rate(A, s, delta) = d/d(delta) u(A ⊥ (s, delta)) and the offsets at which
// that rate may jump.
template <typename Action>
struct RateModel {
  SequenceFunction<TimedSequence<Action>> utility;
  std::function<double(const TimedSequence<Action>&, const Action&, double)>
      rate;
  std::function<std::vector<double>(const TimedSequence<Action>&,
                                    const Action&)>
      breakpoints;
};

struct DerivativeOptions {
  CheckOptions base;
  double max_delta = 1.0;
  double fd_step = 1e-6;
  double fd_rel_tol = 1e-6;
};

namespace internal {

// Samples delta in [lo, hi] at distance > margin from every breakpoint.
template <typename Rng>
std::optional<double> SampleSmoothOffset(Rng& rng, double lo, double hi,
                                         double margin,
                                         const std::vector<double>& bps) {
  if (!(hi > lo)) return std::nullopt;
  std::uniform_real_distribution<double> dist(lo, hi);
  for (int attempt = 0; attempt < 16; ++attempt) {
    const double d = dist(rng);
    bool clear = true;
    for (double bp : bps) {
      if (std::abs(bp - d) <= margin) {
        clear = false;
        break;
      }
    }
    if (clear) return d;
  }
  return std::nullopt;
}

}  // namespace internal

template <typename Action>
CheckReport<TimedSequence<Action>> CheckDerivativeProps(
    const RateModel<Action>& model,
    const SequenceGenerator<TimedSequence<Action>>& gen_b,
    const std::function<Action(std::mt19937_64&)>& gen_action,
    const DerivativeOptions& opts) {
  using Seq = TimedSequence<Action>;
  if (!model.utility || !model.rate || !model.breakpoints) {
    throw std::invalid_argument(
        "derivative checks need utility, rate and breakpoint reporting");
  }
  const double h = opts.fd_step;
  const double tol = opts.base.tol;
  return internal::RunSamples<Seq>(
      "derivative", opts.base,
      [&](std::uint64_t i, std::mt19937_64& rng,
          internal::SampleOutcome<Seq>& out) {
        const Seq b = gen_b(rng);
        const Seq a = SampleDominated(b, rng);
        const Action s = gen_action(rng);
        const auto bps_a = model.breakpoints(a, s);
        auto bps_ab = bps_a;
        const auto bps_b = model.breakpoints(b, s);
        bps_ab.insert(bps_ab.end(), bps_b.begin(), bps_b.end());
        const Seq probe({{s, 1.0}});

        // Domination: rate(A, s, d) >= rate(B, s, d).
        if (auto d = internal::SampleSmoothOffset(rng, 0.0, opts.max_delta,
                                                  4 * h, bps_ab)) {
          internal::Expect(out, "rate_domination", i, model.rate(a, s, *d),
                           model.rate(b, s, *d), tol, a, b, probe, *d);
        }
        // Non-increase in delta.
        auto d1 = internal::SampleSmoothOffset(rng, 0.0, opts.max_delta,
                                               4 * h, bps_a);
        auto d2 = internal::SampleSmoothOffset(rng, 0.0, opts.max_delta,
                                               4 * h, bps_a);
        if (d1 && d2) {
          if (*d1 > *d2) std::swap(d1, d2);
          internal::Expect(out, "rate_nonincreasing", i, model.rate(a, s, *d1),
                           model.rate(a, s, *d2), tol, a, Seq{}, probe, *d1,
                           *d2);
        }
        // Centered finite difference of u(A ⊥ (s, d)) against rate(A, s, d).
        if (auto d = internal::SampleSmoothOffset(rng, 4 * h, opts.max_delta,
                                                  4 * h, bps_a)) {
          Seq hi = a;
          hi.Append(s, *d + h);
          Seq lo = a;
          lo.Append(s, *d - h);
          const double fd = (model.utility(hi) - model.utility(lo)) / (2 * h);
          const double r = model.rate(a, s, *d);
          const double allowed = opts.fd_rel_tol * std::max(1.0, std::abs(r));
          ++out.points;
          if (std::abs(fd - r) > allowed) {
            out.violations.push_back({"finite_difference", i, a, Seq{}, probe,
                                      fd, r, std::abs(fd - r), *d, h});
          }
        }
      });
}

}  // namespace seqsub

#endif  // SEQSUB_CHECKS_H_
