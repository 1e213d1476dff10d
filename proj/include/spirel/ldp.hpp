// Copyright 2026 The Spirel Authors
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

#ifndef SPIREL_LDP_HPP_
#define SPIREL_LDP_HPP_

#include <cstdint>

#include "spirel/random.hpp"

// Local differential privacy primitives used by the collection protocols:
// optimized randomized response for single bits and the piecewise mechanism
// for bounded numeric values, plus budget accounting under sequential
// composition.
//
// All mechanisms draw from an explicit caller-owned generator. Given the
// generator state, every function here is a pure function of its inputs.

namespace spirel {

// Epsilon values above this are rejected: they carry no meaningful privacy
// guarantee and e^epsilon starts to lose precision.
inline constexpr double kMaxEpsilon = 50.0;

// A total budget split across the two collection rounds. Invariant:
// transition_epsilon + gradient_epsilon == total_epsilon, all positive.
struct PrivacyBudget {
  double total_epsilon = 0;
  double transition_epsilon = 0;
  double gradient_epsilon = 0;
};

// Optimized randomized response over one bit: a true 1 is reported as 1 with
// probability p = 1/2, a true 0 with probability q = 1/(e^epsilon + 1). This
// choice minimizes the variance of the debiased count estimator.
struct RrParams {
  double p = 0;
  double q = 0;
  double epsilon = 0;
};

// Piecewise mechanism parameters. Inputs live in [-1, 1], outputs in
// [-range_bound, range_bound] with range_bound = (e^{eps/2}+1)/(e^{eps/2}-1).
struct PmParams {
  double epsilon = 0;
  double range_bound = 0;
};

// Builds randomized-response parameters for a budget of `epsilon`.
// Throws std::invalid_argument if epsilon is not in (0, kMaxEpsilon].
RrParams make_rr_params(double epsilon);

// Builds piecewise-mechanism parameters for a budget of `epsilon`.
// Throws std::invalid_argument if epsilon is not in (0, kMaxEpsilon].
PmParams make_pm_params(double epsilon);

// Reports a perturbed copy of `bit`: 1 with probability p if the true bit is
// 1, with probability q if it is 0.
inline int rr_perturb_bit(int bit, const RrParams& params, Rng& rng) {
  return bernoulli(rng, bit != 0 ? params.p : params.q) ? 1 : 0;
}

// Debiased count estimate from `ones_observed` positive reports out of
// `report_count` total: (ones - m*q) / (p - q). Unbiased for the true number
// of 1-holders; can be negative when the true count is near zero.
// Throws std::invalid_argument if report_count < 1 or counts are
// inconsistent.
double rr_estimate_count(std::int64_t ones_observed, std::int64_t report_count,
                         const RrParams& params);

// Perturbs a value in [-1, 1]. With probability e^{eps/2}/(e^{eps/2}+1) the
// output is uniform on the center piece [l(v), r(v)] where
//   l(v) = (C+1)/2 * v - (C-1)/2   and   r(v) = l(v) + C - 1,
// otherwise it is uniform on [-C, l(v)) U (r(v), C], the two tails weighted
// by their lengths. The output is an unbiased estimate of `value`.
// Throws std::domain_error if value is outside [-1, 1]; clamping is the
// caller's responsibility so the mechanism never silently alters its input.
double pm_perturb(double value, const PmParams& params, Rng& rng);

// Splits `total` into a transition share of ratio_transition * total and a
// gradient share of the remainder. ratio_transition must be in (0, 1).
PrivacyBudget split_budget(double total, double ratio_transition);

}  // namespace spirel

#endif  // SPIREL_LDP_HPP_
