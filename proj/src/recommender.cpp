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

#include "spirel/recommender.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace spirel {

namespace {

void check_poi(int poi, Eigen::Index n, const char* what) {
  if (poi < 0 || poi >= n) {
    throw std::domain_error(std::string(what) + ": POI id outside [0, n)");
  }
}

}  // namespace

double preference(const Eigen::VectorXd& user_factors, int current_poi,
                  int candidate_poi, const Eigen::MatrixXd& poi_factors) {
  check_poi(current_poi, poi_factors.rows(), "preference");
  check_poi(candidate_poi, poi_factors.rows(), "preference");
  const auto candidate = poi_factors.row(candidate_poi);
  return candidate.dot(user_factors) +
         candidate.dot(poi_factors.row(current_poi));
}

Eigen::VectorXd preference_scores(const Eigen::VectorXd& user_factors,
                                  int current_poi,
                                  const Eigen::MatrixXd& poi_factors) {
  check_poi(current_poi, poi_factors.rows(), "preference_scores");
  return poi_factors *
         (user_factors + poi_factors.row(current_poi).transpose());
}

std::vector<int> rank_all(const Eigen::VectorXd& scores) {
  std::vector<int> order(static_cast<std::size_t>(scores.size()));
  std::iota(order.begin(), order.end(), 0);
  // NaN scores sort last so a diverged model still yields a total order.
  const auto key = [&](int i) {
    const double score = scores(i);
    return std::isnan(score) ? -std::numeric_limits<double>::infinity()
                             : score;
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const double sa = key(a);
    const double sb = key(b);
    if (sa != sb) return sa > sb;
    return a < b;
  });
  return order;
}

Recommendation top_k(const Eigen::VectorXd& user_factors, int current_poi,
                     const Eigen::MatrixXd& poi_factors, int k) {
  const auto n = static_cast<int>(poi_factors.rows());
  if (k < 1 || k > n) {
    throw std::invalid_argument("top_k: k must lie in [1, n]");
  }
  const Eigen::VectorXd scores =
      preference_scores(user_factors, current_poi, poi_factors);
  const std::vector<int> order = rank_all(scores);
  Recommendation recommendation;
  recommendation.ranked.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    recommendation.ranked.emplace_back(order[static_cast<std::size_t>(i)],
                                       scores(order[static_cast<std::size_t>(i)]));
  }
  return recommendation;
}

}  // namespace spirel
