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

#ifndef SPIREL_EVALUATION_HPP_
#define SPIREL_EVALUATION_HPP_

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spirel/dataset.hpp"
#include "spirel/trainer.hpp"

// Recall@k / MRR against held-out latest check-ins.

namespace spirel {

// One evaluated user: the held-out latest check-in paired with the last
// training check-in as the current location.
struct EvalCase {
  int user_index = 0;
  int current_poi = 0;
  int heldout_poi = 0;
};

// Splits each history and records the evaluation pair. Every user with at
// least two check-ins is evaluable.
std::vector<EvalCase> build_eval_cases(
    const std::vector<CheckinHistory>& histories);

// Fraction of users whose held-out POI appears among the first k entries of
// their ranking. Rankings must hold at least k entries each; a missing
// ranking is an error.
double recall_at_k(const std::vector<std::vector<int>>& rankings,
                   const std::vector<int>& heldout, int k);

// Mean over users of 1 / (1-indexed rank of the held-out POI). Rankings must
// cover the full POI domain.
double mean_reciprocal_rank(const std::vector<std::vector<int>>& rankings,
                            const std::vector<int>& heldout);

// Aggregated metrics for one experiment cell.
struct MetricsReport {
  std::string method;
  std::string dataset;
  double epsilon = 0;
  double split_ratio = 0;
  int iterations = 0;
  int d = 0;
  int seed_count = 0;
  std::map<int, double> recall_at;
  double mrr = 0;
  int evaluated_users = 0;
};

// Per-user full rankings for a trained model. SPIREL scores candidates by
// u^T v_k + v_current^T v_k; the baselines use the personal term alone.
std::vector<std::vector<int>> rank_users(const TrainResult& result,
                                         const std::vector<EvalCase>& cases,
                                         bool use_transition_term);

}  // namespace spirel

#endif  // SPIREL_EVALUATION_HPP_
