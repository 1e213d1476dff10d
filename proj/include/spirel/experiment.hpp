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

#ifndef SPIREL_EXPERIMENT_HPP_
#define SPIREL_EXPERIMENT_HPP_

#include <iosfwd>
#include <string>
#include <vector>

#include "spirel/config.hpp"
#include "spirel/evaluation.hpp"

// Orchestrates the comparative experiments: one cell per
// (method, epsilon, split, iterations), each averaged over the configured
// seeds, emitted as CSV rows per metric k.

namespace spirel {

struct ExperimentCell {
  std::string method;
  double epsilon = 0;
  double split_ratio = 0;
  int iterations = 0;
};

// The prepared dataset shared by every cell.
struct ExperimentData {
  std::vector<CheckinHistory> training;
  std::vector<EvalCase> cases;
  std::vector<int> heldout;
  int n = 0;
  std::string descriptor;
  // Users the loader discarded for having fewer than two check-ins.
  int dropped_users = 0;
};

ExperimentData prepare_data(const ExperimentConfig& config);

// Cell list for a point run ([privacy] singletons) or a sweep ([sweep] axes,
// falling back to the singletons).
std::vector<ExperimentCell> enumerate_cells(const ExperimentConfig& config,
                                            bool sweep);

// Trains and evaluates one cell across the configured seeds.
MetricsReport run_cell(const ExperimentData& data,
                       const ExperimentConfig& config,
                       const ExperimentCell& cell);

inline constexpr const char* kMetricsCsvHeader =
    "method,dataset,epsilon,split_ratio,iterations,d,seed_count,k,recall,mrr";

void append_metrics_rows(std::ostream& out, const MetricsReport& report,
                         const std::vector<int>& ks);

// Runs every cell (in parallel when jobs > 1), streaming completed cells to
// `csv` in deterministic cell order. Progress lines go to `progress` when it
// is non-null. Completed rows are flushed even if a later cell fails.
std::vector<MetricsReport> run_experiment(const ExperimentConfig& config,
                                          bool sweep, std::ostream& csv,
                                          int jobs, std::ostream* progress);

}  // namespace spirel

#endif  // SPIREL_EXPERIMENT_HPP_
