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

#include "spirel/transition.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

#include "spirel/io_util.hpp"

namespace spirel {

std::int64_t encode_transition(const Transition& transition, int n) {
  if (transition.src < 0 || transition.src >= n || transition.dst < 0 ||
      transition.dst >= n) {
    throw std::domain_error("encode_transition: POI id outside [0, n)");
  }
  return static_cast<std::int64_t>(transition.src) * n + transition.dst;
}

PerturbedBitString client_report(const std::optional<Transition>& transition,
                                 int n, double epsilon1, Rng& rng) {
  if (n < 1) {
    throw std::invalid_argument("client_report: need n >= 1");
  }
  const std::int64_t length = static_cast<std::int64_t>(n) * n;
  if (length > kMaxBitStringLength) {
    throw std::invalid_argument(
        "client_report: n^2 exceeds the per-report bit budget");
  }
  const RrParams params = make_rr_params(epsilon1);
  const std::int64_t hot =
      transition.has_value() ? encode_transition(*transition, n) : -1;

  PerturbedBitString bits(static_cast<std::size_t>(length));
  for (std::int64_t i = 0; i < length; ++i) {
    bits[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(
        rr_perturb_bit(i == hot ? 1 : 0, params, rng));
  }
  return bits;
}

TransitionAggregator::TransitionAggregator(int n, double epsilon1)
    : n_(n), params_(make_rr_params(epsilon1)) {
  if (n < 1) {
    throw std::invalid_argument("TransitionAggregator: need n >= 1");
  }
  ones_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

void TransitionAggregator::add(const PerturbedBitString& report) {
  if (report.size() != ones_.size()) {
    throw std::runtime_error(
        "TransitionAggregator: report length does not match n^2");
  }
  for (std::size_t i = 0; i < report.size(); ++i) {
    ones_[i] += report[i] != 0 ? 1 : 0;
  }
  ++report_count_;
}

Eigen::MatrixXd TransitionAggregator::estimate() const {
  if (report_count_ == 0) {
    throw std::invalid_argument("TransitionAggregator: no reports to estimate");
  }
  Eigen::MatrixXd raw(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      raw(i, j) = rr_estimate_count(
          ones_[static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
                static_cast<std::size_t>(j)],
          report_count_, params_);
    }
  }
  return raw;
}

Eigen::MatrixXd aggregate(const std::vector<PerturbedBitString>& reports,
                          double epsilon1) {
  if (reports.empty()) {
    throw std::invalid_argument("aggregate: need at least one report");
  }
  const std::size_t length = reports.front().size();
  const auto n = static_cast<int>(std::llround(std::sqrt(
      static_cast<double>(length))));
  if (static_cast<std::size_t>(n) * static_cast<std::size_t>(n) != length) {
    throw std::runtime_error("aggregate: report length is not a square");
  }
  TransitionAggregator aggregator(n, epsilon1);
  for (const auto& report : reports) aggregator.add(report);
  return aggregator.estimate();
}

Eigen::MatrixXd normalize_transitions(const Eigen::MatrixXd& raw,
                                      double sigmoid_scale) {
  if (!(sigmoid_scale > 0) || !std::isfinite(sigmoid_scale)) {
    throw std::invalid_argument(
        "normalize_transitions: sigmoid_scale must be positive");
  }
  return raw.unaryExpr([sigmoid_scale](double x) {
    return 1.0 + 1.0 / (1.0 + std::exp(-x / sigmoid_scale));
  });
}

void write_square_matrix(const std::string& path,
                         const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("write_square_matrix: matrix must be square");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::runtime_error("write_square_matrix: cannot open " + path);
  }
  io::write_i64(out, matrix.rows());
  io::write_matrix_body(out, matrix);
  if (!out) {
    throw std::runtime_error("write_square_matrix: write failed for " + path);
  }
}

Eigen::MatrixXd read_square_matrix(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("read_square_matrix: cannot open " + path);
  }
  const std::int64_t n = io::read_i64(in);
  if (n < 0 || n > 100000) {
    throw std::runtime_error("read_square_matrix: implausible dimension");
  }
  Eigen::MatrixXd matrix(n, n);
  io::read_matrix_body(in, matrix);
  if (!in) {
    throw std::runtime_error("read_square_matrix: truncated file " + path);
  }
  return matrix;
}

}  // namespace spirel
