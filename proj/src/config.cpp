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

#include "spirel/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace spirel {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double parsed = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() ||
      !std::isfinite(parsed)) {
    throw ConfigError("config: key '" + key + "' expects a number, got '" +
                      value + "'");
  }
  return parsed;
}

long long parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long long parsed = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size()) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" +
                      value + "'");
  }
  return parsed;
}

std::vector<std::string> split_list(const std::string& value) {
  std::vector<std::string> items;
  std::stringstream stream(value);
  std::string item;
  while (std::getline(stream, item, ',')) {
    const std::string trimmed = trim(item);
    if (!trimmed.empty()) items.push_back(trimmed);
  }
  return items;
}

void require(bool condition, const std::string& key,
             const std::string& constraint) {
  if (!condition) {
    throw ConfigError("config: key '" + key + "' " + constraint);
  }
}

void apply_key(ExperimentConfig& config, const std::string& section,
               const std::string& key, const std::string& value) {
  const std::string full = section.empty() ? key : section + "." + key;
  if (section.empty()) {
    throw ConfigError("config: key '" + key +
                      "' must appear inside a [section]");
  }

  if (section == "dataset") {
    if (key == "source") {
      if (value == "synthetic") {
        config.dataset.source = DatasetSpec::Source::kSynthetic;
      } else if (value == "file") {
        config.dataset.source = DatasetSpec::Source::kFile;
      } else {
        throw ConfigError("config: key '" + full +
                          "' must be 'synthetic' or 'file'");
      }
      return;
    }
    if (key == "path") { config.dataset.path = value; return; }
    if (key == "m") {
      config.dataset.m = static_cast<int>(parse_int(full, value));
      require(config.dataset.m >= 2, full, "must be >= 2");
      return;
    }
    if (key == "n") {
      config.dataset.n = static_cast<int>(parse_int(full, value));
      require(config.dataset.n >= 2, full, "must be >= 2");
      return;
    }
    if (key == "len") {
      config.dataset.len = static_cast<int>(parse_int(full, value));
      require(config.dataset.len >= 2, full, "must be >= 2");
      return;
    }
    if (key == "model") { config.dataset.model = value; return; }
    if (key == "seed") {
      config.dataset.seed =
          static_cast<std::uint64_t>(parse_int(full, value));
      return;
    }
  } else if (section == "privacy") {
    if (key == "epsilon") {
      config.epsilon = parse_double(full, value);
      require(config.epsilon > 0 && config.epsilon <= kMaxEpsilon, full,
              "must lie in (0, 50]");
      return;
    }
    if (key == "split_ratio") {
      config.split_ratio = parse_double(full, value);
      require(config.split_ratio > 0 && config.split_ratio < 1, full,
              "must lie strictly inside (0, 1)");
      return;
    }
  } else if (section == "train") {
    if (key == "d") {
      config.trainer.d = static_cast<int>(parse_int(full, value));
      require(config.trainer.d >= 1, full, "must be >= 1");
      return;
    }
    if (key == "baseline_d") {
      config.baseline_d = static_cast<int>(parse_int(full, value));
      require(config.baseline_d >= 1, full, "must be >= 1");
      return;
    }
    if (key == "lambda") {
      config.trainer.lambda = parse_double(full, value);
      require(config.trainer.lambda >= 0, full, "must be >= 0");
      return;
    }
    if (key == "gamma") {
      config.trainer.gamma = parse_double(full, value);
      require(config.trainer.gamma > 0, full, "must be > 0");
      return;
    }
    if (key == "iterations") {
      config.trainer.iterations = static_cast<int>(parse_int(full, value));
      require(config.trainer.iterations >= 1, full, "must be >= 1");
      return;
    }
    if (key == "beta1") {
      config.trainer.beta1 = parse_double(full, value);
      require(config.trainer.beta1 >= 0 && config.trainer.beta1 < 1, full,
              "must lie in [0, 1)");
      return;
    }
    if (key == "beta2") {
      config.trainer.beta2 = parse_double(full, value);
      require(config.trainer.beta2 >= 0 && config.trainer.beta2 < 1, full,
              "must lie in [0, 1)");
      return;
    }
    if (key == "adam_epsilon") {
      config.trainer.adam_epsilon = parse_double(full, value);
      require(config.trainer.adam_epsilon > 0, full, "must be > 0");
      return;
    }
    if (key == "optimizer") {
      if (value == "adam") {
        config.trainer.optimizer = Optimizer::kAdam;
      } else if (value == "sgd") {
        config.trainer.optimizer = Optimizer::kSgd;
      } else {
        throw ConfigError("config: key '" + full +
                          "' must be 'adam' or 'sgd'");
      }
      return;
    }
    if (key == "sigmoid_scale") {
      config.trainer.sigmoid_scale = parse_double(full, value);
      require(config.trainer.sigmoid_scale > 0, full, "must be > 0");
      return;
    }
    if (key == "npb_gamma") {
      config.trainer.npb_gamma = parse_double(full, value);
      require(config.trainer.npb_gamma > 0, full, "must be > 0");
      return;
    }
    if (key == "npb_epochs") {
      config.trainer.npb_epochs = static_cast<int>(parse_int(full, value));
      require(config.trainer.npb_epochs >= 1, full, "must be >= 1");
      return;
    }
  } else if (section == "eval") {
    if (key == "methods") {
      config.methods.clear();
      for (const auto& item : split_list(value)) {
        if (item != "spirel" && item != "npb" && item != "pb") {
          throw ConfigError("config: key '" + full + "' has unknown method '" +
                            item + "'");
        }
        config.methods.push_back(item);
      }
      require(!config.methods.empty(), full, "must name at least one method");
      return;
    }
    if (key == "ks") {
      config.metric_ks.clear();
      for (const auto& item : split_list(value)) {
        const int k = static_cast<int>(parse_int(full, item));
        require(k >= 1, full, "entries must be >= 1");
        config.metric_ks.push_back(k);
      }
      std::sort(config.metric_ks.begin(), config.metric_ks.end());
      config.metric_ks.erase(
          std::unique(config.metric_ks.begin(), config.metric_ks.end()),
          config.metric_ks.end());
      require(!config.metric_ks.empty(), full, "must name at least one k");
      return;
    }
    if (key == "seeds") {
      config.seeds.clear();
      for (const auto& item : split_list(value)) {
        config.seeds.push_back(
            static_cast<std::uint64_t>(parse_int(full, item)));
      }
      require(!config.seeds.empty(), full, "must name at least one seed");
      return;
    }
  } else if (section == "sweep") {
    if (key == "epsilons") {
      config.sweep_epsilons.clear();
      for (const auto& item : split_list(value)) {
        const double epsilon = parse_double(full, item);
        require(epsilon > 0 && epsilon <= kMaxEpsilon, full,
                "entries must lie in (0, 50]");
        config.sweep_epsilons.push_back(epsilon);
      }
      return;
    }
    if (key == "split_ratios") {
      config.sweep_split_ratios.clear();
      for (const auto& item : split_list(value)) {
        const double ratio = parse_double(full, item);
        require(ratio > 0 && ratio < 1, full,
                "entries must lie strictly inside (0, 1)");
        config.sweep_split_ratios.push_back(ratio);
      }
      return;
    }
    if (key == "iteration_counts") {
      config.sweep_iteration_counts.clear();
      for (const auto& item : split_list(value)) {
        const int count = static_cast<int>(parse_int(full, item));
        require(count >= 1, full, "entries must be >= 1");
        config.sweep_iteration_counts.push_back(count);
      }
      return;
    }
  } else {
    throw ConfigError("config: unknown section '[" + section + "]'");
  }
  throw ConfigError("config: unknown key '" + full + "'");
}

void validate(ExperimentConfig& config, bool check_paths) {
  if (config.dataset.source == DatasetSpec::Source::kSynthetic) {
    // Fail fast on an unknown model name.
    try {
      make_transition_model(config.dataset.model, config.dataset.n);
    } catch (const std::invalid_argument& error) {
      throw ConfigError(std::string("config: key 'dataset.model': ") +
                        error.what());
    }
  } else {
    if (config.dataset.path.empty()) {
      throw ConfigError("config: key 'dataset.path' is required for "
                        "source = file");
    }
    if (check_paths && !std::filesystem::exists(config.dataset.path)) {
      throw ConfigError("config: key 'dataset.path' points to a missing "
                        "file: " + config.dataset.path);
    }
  }
}

}  // namespace

std::string DatasetSpec::describe() const {
  if (source == Source::kFile) {
    return std::filesystem::path(path).filename().string();
  }
  std::stringstream out;
  out << "synthetic-m" << m << "-n" << n << "-len" << len << "-" << model;
  return out.str();
}

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  std::stringstream stream(text);
  std::string line;
  std::string section;
  int line_number = 0;
  while (std::getline(stream, line)) {
    ++line_number;
    const std::string content = trim(line);
    if (content.empty() || content[0] == '#' || content[0] == ';') continue;
    if (content.front() == '[') {
      if (content.back() != ']') {
        throw ConfigError("config: malformed section header at line " +
                          std::to_string(line_number));
      }
      section = trim(content.substr(1, content.size() - 2));
      continue;
    }
    const std::size_t equals = content.find('=');
    if (equals == std::string::npos) {
      throw ConfigError("config: expected 'key = value' at line " +
                        std::to_string(line_number));
    }
    const std::string key = trim(content.substr(0, equals));
    const std::string value = trim(content.substr(equals + 1));
    if (key.empty()) {
      throw ConfigError("config: empty key at line " +
                        std::to_string(line_number));
    }
    apply_key(config, section, key, value);
  }
  validate(config, /*check_paths=*/false);
  return config;
}

ExperimentConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path);
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  ExperimentConfig config = parse_config_text(buffer.str());
  validate(config, /*check_paths=*/true);
  return config;
}

}  // namespace spirel
