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

#ifndef SPIREL_CONFIG_HPP_
#define SPIREL_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spirel/trainer.hpp"

// Experiment configuration: a key = value file with [section] headers.
// Every key has a default mirroring the reference experiment settings, so an
// empty file is a valid configuration.

namespace spirel {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DatasetSpec {
  enum class Source { kSynthetic, kFile };
  Source source = Source::kSynthetic;
  std::string path;
  int m = 10000;
  int n = 373;
  int len = 20;
  std::string model = "random-walk";
  std::uint64_t seed = 1;

  std::string describe() const;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  std::vector<std::string> methods{"spirel", "npb", "pb"};
  double epsilon = 1.0;
  double split_ratio = 0.5;
  TrainConfig trainer;
  // Latent dimension for the NPB/PB baselines; 0 means "same as trainer.d".
  int baseline_d = 0;
  std::vector<int> metric_ks{3, 5, 7, 10};
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  // Sweep axes; an empty list falls back to the corresponding singleton.
  std::vector<double> sweep_epsilons;
  std::vector<double> sweep_split_ratios;
  std::vector<int> sweep_iteration_counts;

  int effective_baseline_d() const {
    return baseline_d > 0 ? baseline_d : trainer.d;
  }
};

// Parses and fully validates a configuration. parse_config additionally
// requires a referenced dataset file to exist. Unknown sections or keys and
// out-of-range values raise ConfigError naming the key.
ExperimentConfig parse_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);

}  // namespace spirel

#endif  // SPIREL_CONFIG_HPP_
