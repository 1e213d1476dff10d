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

#ifndef SPIREL_TESTS_TEST_UTIL_HPP_
#define SPIREL_TESTS_TEST_UTIL_HPP_

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spirel/random.hpp"

namespace spirel::testing {

inline double mean(const std::vector<double>& values) {
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

inline double sample_std(const std::vector<double>& values) {
  const double m = mean(values);
  double sum = 0;
  for (const double v : values) sum += (v - m) * (v - m);
  return std::sqrt(sum / static_cast<double>(values.size() - 1));
}

// Standard error of the mean.
inline double standard_error(const std::vector<double>& values) {
  return sample_std(values) / std::sqrt(static_cast<double>(values.size()));
}

// Matrix-free conjugate gradient for the ridge system
//   (V^T V + lambda I) u = V^T r,
// used as an independent minimizer of ||r - V u||^2 + lambda ||u||^2.
inline Eigen::VectorXd ridge_minimizer_cg(const Eigen::MatrixXd& factors,
                                          const Eigen::VectorXd& target,
                                          double lambda) {
  const auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
    return factors.transpose() * (factors * x) + lambda * x;
  };
  const Eigen::VectorXd b = factors.transpose() * target;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(factors.cols());
  Eigen::VectorXd residual = b;
  Eigen::VectorXd direction = residual;
  double residual_sq = residual.squaredNorm();
  const double threshold = 1e-28 * std::max(b.squaredNorm(), 1e-300);
  for (int step = 0; step < 8 * factors.cols() && residual_sq > threshold;
       ++step) {
    const Eigen::VectorXd h = apply(direction);
    const double alpha = residual_sq / direction.dot(h);
    x += alpha * direction;
    residual -= alpha * h;
    const double next_sq = residual.squaredNorm();
    direction = residual + (next_sq / residual_sq) * direction;
    residual_sq = next_sq;
  }
  return x;
}

// Least-squares slope of log(y) against log(x).
inline double loglog_slope(const std::vector<double>& x,
                           const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const double mx = mean(lx);
  const double my = mean(ly);
  double num = 0;
  double den = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    num += (lx[i] - mx) * (ly[i] - my);
    den += (lx[i] - mx) * (lx[i] - mx);
  }
  return num / den;
}

// Unique temp path under the build tree.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    path_ = std::filesystem::temp_directory_path() /
            ("spirel_test_" + tag + "_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

}  // namespace spirel::testing

#endif  // SPIREL_TESTS_TEST_UTIL_HPP_
