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

#include "spirel/ldp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace spirel {

namespace {

void check_epsilon(double epsilon, const char* what) {
  if (!std::isfinite(epsilon) || epsilon <= 0) {
    throw std::invalid_argument(std::string(what) +
                                ": epsilon must be positive and finite");
  }
  if (epsilon > kMaxEpsilon) {
    throw std::invalid_argument(std::string(what) + ": epsilon " +
                                std::to_string(epsilon) + " exceeds the cap " +
                                std::to_string(kMaxEpsilon));
  }
}

}  // namespace

RrParams make_rr_params(double epsilon) {
  check_epsilon(epsilon, "make_rr_params");
  RrParams params;
  params.epsilon = epsilon;
  params.p = 0.5;
  params.q = 1.0 / (std::exp(epsilon) + 1.0);
  return params;
}

PmParams make_pm_params(double epsilon) {
  check_epsilon(epsilon, "make_pm_params");
  PmParams params;
  params.epsilon = epsilon;
  const double half = std::exp(epsilon / 2.0);
  params.range_bound = (half + 1.0) / (half - 1.0);
  return params;
}

double rr_estimate_count(std::int64_t ones_observed, std::int64_t report_count,
                         const RrParams& params) {
  if (report_count < 1) {
    throw std::invalid_argument("rr_estimate_count: need at least one report");
  }
  if (ones_observed < 0 || ones_observed > report_count) {
    throw std::invalid_argument(
        "rr_estimate_count: ones_observed must be within [0, report_count]");
  }
  const double m = static_cast<double>(report_count);
  return (static_cast<double>(ones_observed) - m * params.q) /
         (params.p - params.q);
}

double pm_perturb(double value, const PmParams& params, Rng& rng) {
  if (!(value >= -1.0 && value <= 1.0)) {
    throw std::domain_error("pm_perturb: value must lie in [-1, 1]");
  }
  const double c = params.range_bound;
  const double left = (c + 1.0) / 2.0 * value - (c - 1.0) / 2.0;
  const double right = left + c - 1.0;
  const double half = std::exp(params.epsilon / 2.0);
  const double center_probability = half / (half + 1.0);

  if (bernoulli(rng, center_probability)) {
    return uniform_range(rng, left, right);
  }
  // Tail draw: uniform over [-C, l) U (r, C], each side weighted by length.
  const double left_len = left + c;
  const double right_len = c - right;
  const double x = uniform_unit(rng) * (left_len + right_len);
  if (x < left_len) {
    return -c + x;
  }
  return right + (x - left_len);
}

PrivacyBudget split_budget(double total, double ratio_transition) {
  check_epsilon(total, "split_budget");
  if (!std::isfinite(ratio_transition) || ratio_transition <= 0 ||
      ratio_transition >= 1) {
    throw std::invalid_argument(
        "split_budget: ratio_transition must lie strictly inside (0, 1)");
  }
  PrivacyBudget budget;
  budget.total_epsilon = total;
  budget.transition_epsilon = ratio_transition * total;
  budget.gradient_epsilon = total - budget.transition_epsilon;
  return budget;
}

}  // namespace spirel
