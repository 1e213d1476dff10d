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

#ifndef SPIREL_RECOMMENDER_HPP_
#define SPIREL_RECOMMENDER_HPP_

#include <utility>
#include <vector>

#include <Eigen/Dense>

// Client-side ranking. Scores need only the public POI factors and the
// client's own state; no server interaction happens here.

namespace spirel {

struct Recommendation {
  // (POI id, score), scores non-increasing, ids distinct; ties broken by
  // ascending POI id.
  std::vector<std::pair<int, double>> ranked;
};

// Next-POI preference: the personal term u^T v_k plus the transition term
// v_current^T v_k.
double preference(const Eigen::VectorXd& user_factors, int current_poi,
                  int candidate_poi, const Eigen::MatrixXd& poi_factors);

// All n preference scores for a client at `current_poi`.
Eigen::VectorXd preference_scores(const Eigen::VectorXd& user_factors,
                                  int current_poi,
                                  const Eigen::MatrixXd& poi_factors);

// The k highest-preference POIs over all n candidates (the current POI
// included).
Recommendation top_k(const Eigen::VectorXd& user_factors, int current_poi,
                     const Eigen::MatrixXd& poi_factors, int k);

// Full ordering of [0, n) by non-increasing score, ties by ascending id.
std::vector<int> rank_all(const Eigen::VectorXd& scores);

}  // namespace spirel

#endif  // SPIREL_RECOMMENDER_HPP_
