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

#include <string>

#include <doctest.h>

#include "test_util.hpp"

namespace spirel {
namespace {

TEST_SUITE_BEGIN("config");

TEST_CASE("an empty file yields the default experiment settings") {
  const ExperimentConfig config = parse_config_text("");
  CHECK(config.epsilon == 1.0);
  CHECK(config.split_ratio == 0.5);
  CHECK(config.trainer.iterations == 10);
  CHECK(config.trainer.lambda == 1e-8);
  CHECK(config.trainer.gamma == 1.0);
  CHECK(config.trainer.d == 10);
  CHECK(config.metric_ks == std::vector<int>{3, 5, 7, 10});
  CHECK(config.seeds.size() == 10);
  CHECK(config.methods == std::vector<std::string>{"spirel", "npb", "pb"});
  CHECK(config.dataset.source == DatasetSpec::Source::kSynthetic);
  CHECK(config.dataset.m == 10000);
  CHECK(config.dataset.n == 373);
  CHECK(config.dataset.len == 20);
}

TEST_CASE("values parse into the right fields") {
  const ExperimentConfig config = parse_config_text(
      "[dataset]\n"
      "m = 500\n"
      "n = 50\n"
      "len = 12\n"
      "model = sticky-cycle:0.3:0.5\n"
      "seed = 9\n"
      "\n"
      "[privacy]\n"
      "epsilon = 0.4\n"
      "split_ratio = 0.25\n"
      "\n"
      "[train]\n"
      "d = 15\n"
      "baseline_d = 5\n"
      "optimizer = sgd\n"
      "sigmoid_scale = 250\n"
      "iterations = 7\n"
      "\n"
      "[eval]\n"
      "methods = spirel, npb\n"
      "ks = 5,3,5\n"
      "seeds = 4,5\n"
      "\n"
      "[sweep]\n"
      "epsilons = 0.2,1.0\n");
  CHECK(config.dataset.m == 500);
  CHECK(config.dataset.model == "sticky-cycle:0.3:0.5");
  CHECK(config.epsilon == 0.4);
  CHECK(config.split_ratio == 0.25);
  CHECK(config.trainer.d == 15);
  CHECK(config.effective_baseline_d() == 5);
  CHECK(config.trainer.optimizer == Optimizer::kSgd);
  CHECK(config.trainer.sigmoid_scale == 250.0);
  CHECK(config.trainer.iterations == 7);
  CHECK(config.methods == std::vector<std::string>{"spirel", "npb"});
  CHECK(config.metric_ks == std::vector<int>{3, 5});  // sorted, deduplicated
  CHECK(config.seeds == std::vector<std::uint64_t>{4, 5});
  CHECK(config.sweep_epsilons == std::vector<double>{0.2, 1.0});
}

TEST_CASE("errors name the offending key") {
  CHECK_THROWS_WITH_AS(parse_config_text("[privacy]\nepsilon = -1\n"),
                       doctest::Contains("privacy.epsilon"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[train]\nwarp_speed = 9\n"),
                       doctest::Contains("train.warp_speed"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config_text("[warp]\nspeed = 9\n"),
                       doctest::Contains("warp"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[privacy]\nepsilon\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("[eval]\nmethods = spirel, magic\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config_text("[dataset]\nmodel = fancy\n"),
                  ConfigError);
  CHECK_THROWS_AS(
      parse_config_text("[dataset]\nsource = file\n"),  // no path
      ConfigError);
}

TEST_CASE("paper-scale dimensions are accepted") {
  const ExperimentConfig config = parse_config_text("[train]\nd = 15\n");
  CHECK(config.trainer.d == 15);
}

TEST_CASE("file-backed configs check the dataset path") {
  testing::TempDir dir("config_paths");
  const std::string config_path = dir.file("run.ini");
  testing::write_text(config_path,
                      "[dataset]\nsource = file\npath = " +
                          dir.file("missing.tsv") + "\n");
  CHECK_THROWS_WITH_AS(parse_config(config_path),
                       doctest::Contains("missing.tsv"), ConfigError);

  testing::write_text(dir.file("present.tsv"), "1\t1\t0\n1\t2\t1\n");
  testing::write_text(config_path,
                      "[dataset]\nsource = file\npath = " +
                          dir.file("present.tsv") + "\n");
  const ExperimentConfig config = parse_config(config_path);
  CHECK(config.dataset.source == DatasetSpec::Source::kFile);
}

TEST_CASE("comments and blank lines are ignored") {
  const ExperimentConfig config = parse_config_text(
      "# leading comment\n"
      "\n"
      "[privacy]\n"
      "; another comment\n"
      "epsilon = 0.8\n");
  CHECK(config.epsilon == 0.8);
}

TEST_SUITE_END();

}  // namespace
}  // namespace spirel
