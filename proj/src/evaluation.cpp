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

#include "spirel/evaluation.hpp"

#include <algorithm>
#include <stdexcept>

#include "spirel/recommender.hpp"

namespace spirel {

std::vector<EvalCase> build_eval_cases(
    const std::vector<CheckinHistory>& histories) {
  std::vector<EvalCase> cases;
  cases.reserve(histories.size());
  for (std::size_t i = 0; i < histories.size(); ++i) {
    const auto [training, heldout] = split_train_test(histories[i]);
    EvalCase eval_case;
    eval_case.user_index = static_cast<int>(i);
    eval_case.current_poi = training.checkins.back().poi;
    eval_case.heldout_poi = heldout.poi;
    cases.push_back(eval_case);
  }
  return cases;
}

double recall_at_k(const std::vector<std::vector<int>>& rankings,
                   const std::vector<int>& heldout, int k) {
  if (rankings.size() != heldout.size()) {
    throw std::runtime_error("recall_at_k: one ranking per user required");
  }
  if (rankings.empty()) {
    throw std::runtime_error("recall_at_k: no users to evaluate");
  }
  if (k < 1) throw std::invalid_argument("recall_at_k: need k >= 1");
  int hits = 0;
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    const auto& ranking = rankings[i];
    if (ranking.size() < static_cast<std::size_t>(k)) {
      throw std::runtime_error("recall_at_k: ranking shorter than k");
    }
    const auto end = ranking.begin() + k;
    if (std::find(ranking.begin(), end, heldout[i]) != end) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(rankings.size());
}

double mean_reciprocal_rank(const std::vector<std::vector<int>>& rankings,
                            const std::vector<int>& heldout) {
  if (rankings.size() != heldout.size()) {
    throw std::runtime_error(
        "mean_reciprocal_rank: one ranking per user required");
  }
  if (rankings.empty()) {
    throw std::runtime_error("mean_reciprocal_rank: no users to evaluate");
  }
  double sum = 0;
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    const auto& ranking = rankings[i];
    const auto it = std::find(ranking.begin(), ranking.end(), heldout[i]);
    if (it == ranking.end()) {
      throw std::runtime_error(
          "mean_reciprocal_rank: ranking does not cover the held-out POI");
    }
    sum += 1.0 / static_cast<double>(it - ranking.begin() + 1);
  }
  return sum / static_cast<double>(rankings.size());
}

std::vector<std::vector<int>> rank_users(const TrainResult& result,
                                         const std::vector<EvalCase>& cases,
                                         bool use_transition_term) {
  std::vector<std::vector<int>> rankings;
  rankings.reserve(cases.size());
  const Eigen::MatrixXd& poi_factors = result.model.poi_factors;
  for (const auto& eval_case : cases) {
    const auto& profile =
        result.profiles[static_cast<std::size_t>(eval_case.user_index)];
    Eigen::VectorXd scores;
    if (use_transition_term) {
      scores = preference_scores(profile.user_factors, eval_case.current_poi,
                                 poi_factors);
    } else {
      scores = poi_factors * profile.user_factors;
    }
    rankings.push_back(rank_all(scores));
  }
  return rankings;
}

}  // namespace spirel
