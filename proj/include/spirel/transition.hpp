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

#ifndef SPIREL_TRANSITION_HPP_
#define SPIREL_TRANSITION_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spirel/dataset.hpp"
#include "spirel/ldp.hpp"
#include "spirel/random.hpp"

// The transition collection protocol: each client one-hot encodes a single
// sampled transition into a length n^2 bit string, perturbs every bit with
// optimized randomized response, and the server debiases the per-cell sums
// into an n x n matrix of estimated transition frequencies.

namespace spirel {

// One client report: n^2 perturbed bits. Before perturbation exactly one bit
// is set (none for clients without a transition).
using PerturbedBitString = std::vector<std::uint8_t>;

// Reports larger than this are rejected; n^2 bits per client stops being a
// sensible wire format well before that.
inline constexpr std::int64_t kMaxBitStringLength = 10'000'000;

struct TransitionMatrix {
  Eigen::MatrixXd raw;         // debiased frequency estimates, may be negative
  Eigen::MatrixXd normalized;  // 1 + sigmoid(raw / scale), entries in (1, 2)
};

// Bit position of transition src -> dst in the flattened string:
// src * n + dst. Throws std::domain_error for ids outside [0, n).
std::int64_t encode_transition(const Transition& transition, int n);

// Builds the one-hot (or all-zero) string for the client's sampled
// transition and perturbs every bit independently at the full epsilon1
// budget; one bit never depends on more than one transition pattern, so each
// report is a single epsilon1 event.
PerturbedBitString client_report(const std::optional<Transition>& transition,
                                 int n, double epsilon1, Rng& rng);

// Streaming server-side aggregation: accumulates per-cell counts of positive
// reports and debiases them on demand. Transition-less clients still count
// toward the report total.
class TransitionAggregator {
 public:
  TransitionAggregator(int n, double epsilon1);

  // Throws std::runtime_error when the report length is not n^2.
  void add(const PerturbedBitString& report);

  // Debiased n x n estimate. Throws std::invalid_argument before any report.
  Eigen::MatrixXd estimate() const;

  int report_count() const { return report_count_; }
  int n() const { return n_; }

 private:
  int n_;
  RrParams params_;
  int report_count_ = 0;
  std::vector<std::int64_t> ones_;
};

// One-shot form of the aggregator over a full report list.
Eigen::MatrixXd aggregate(const std::vector<PerturbedBitString>& reports,
                          double epsilon1);

// Elementwise 1 + sigmoid(raw / sigmoid_scale). The default scale of 1 feeds
// the estimated counts to the sigmoid unscaled.
Eigen::MatrixXd normalize_transitions(const Eigen::MatrixXd& raw,
                                      double sigmoid_scale = 1.0);

// Binary dump of a square matrix for experiment checkpointing: n as a
// little-endian 64-bit integer followed by n^2 row-major little-endian
// 64-bit floats.
void write_square_matrix(const std::string& path,
                         const Eigen::MatrixXd& matrix);
Eigen::MatrixXd read_square_matrix(const std::string& path);

}  // namespace spirel

#endif  // SPIREL_TRANSITION_HPP_
