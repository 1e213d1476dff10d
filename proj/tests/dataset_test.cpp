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

#include "spirel/dataset.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include <doctest.h>

#include "test_util.hpp"

namespace spirel {
namespace {

TEST_SUITE_BEGIN("dataset");

TEST_CASE("loads a comma separated file with one user") {
  testing::TempDir dir("load_basic");
  const std::string path = dir.file("checkins.csv");
  testing::write_text(path, "7,100,poiA\n7,101,poiB\n7,102,poiA\n");
  const LoadResult result = load_checkins(path);
  REQUIRE(result.histories.size() == 1);
  CHECK(result.histories[0].user_id == "7");
  CHECK(result.histories[0].size() == 3);
  CHECK(result.domain.n == 2);
  CHECK(result.dropped_users == 0);
  // Lexicographic label order: poiA -> 0, poiB -> 1.
  CHECK(result.histories[0].checkins[0].poi == 0);
  CHECK(result.histories[0].checkins[1].poi == 1);
}

TEST_CASE("loads the five-column layout with ISO timestamps and a header") {
  testing::TempDir dir("load_gowalla");
  const std::string path = dir.file("checkins.tsv");
  testing::write_text(path,
                      "user\ttime\tlat\tlon\tlocation\n"
                      "4\t2010-10-19T23:55:27Z\t30.2\t-97.7\t22847\n"
                      "4\t2010-10-18T22:17:43Z\t30.3\t-97.7\t420315\n"
                      "9\t2010-10-17T01:48:53Z\t40.6\t-73.9\t23261\n"
                      "9\t2010-10-16T06:02:04Z\t40.6\t-74.0\t16907\n");
  const LoadResult result = load_checkins(path);
  REQUIRE(result.histories.size() == 2);
  CHECK(result.domain.n == 4);
  // Numeric label order: 16907 < 22847 < 23261 < 420315.
  CHECK(result.domain.labels[0] == "16907");
  CHECK(result.domain.labels[3] == "420315");
  // Per-user time sorting puts the earlier check-in first.
  CHECK(result.histories[0].checkins[0].time <
        result.histories[0].checkins[1].time);
  CHECK(result.histories[0].checkins[0].poi == 3);  // 420315 visited first
}

TEST_CASE("drops single-checkin users with a count") {
  testing::TempDir dir("load_drop");
  const std::string path = dir.file("checkins.csv");
  testing::write_text(path, "1,10,a\n1,11,b\n2,10,a\n3,10,b\n3,11,b\n");
  const LoadResult result = load_checkins(path);
  CHECK(result.histories.size() == 2);
  CHECK(result.dropped_users == 1);
}

TEST_CASE("reports malformed lines with their number") {
  testing::TempDir dir("load_bad");
  const std::string path = dir.file("checkins.csv");
  testing::write_text(path, "1,10,a\n1,notatime,b\n");
  try {
    load_checkins(path);
    FAIL("expected ParseError");
  } catch (const ParseError& error) {
    CHECK(error.line() == 2);
  }
}

TEST_CASE("fixed domain rejects unknown labels") {
  testing::TempDir dir("load_fixed");
  const std::string path = dir.file("checkins.csv");
  testing::write_text(path, "1,10,a\n1,11,zzz\n");
  PoiDomain domain;
  domain.n = 2;
  domain.labels = {"a", "b"};
  CHECK_THROWS_AS(load_checkins(path, domain), std::domain_error);
}

TEST_CASE("synthetic round trip through the text format") {
  testing::TempDir dir("roundtrip");
  const std::string path = dir.file("checkins.tsv");
  const auto histories = generate_synthetic(25, 6, 8, "random-walk", 42);
  PoiDomain domain;
  domain.n = 6;
  save_checkins(path, histories, domain);
  const LoadResult reloaded = load_checkins(path, domain);
  REQUIRE(reloaded.histories.size() == histories.size());
  for (std::size_t i = 0; i < histories.size(); ++i) {
    CHECK(reloaded.histories[i].user_id == histories[i].user_id);
    REQUIRE(reloaded.histories[i].size() == histories[i].size());
    for (std::size_t j = 0; j < histories[i].size(); ++j) {
      CHECK(reloaded.histories[i].checkins[j].poi ==
            histories[i].checkins[j].poi);
      CHECK(reloaded.histories[i].checkins[j].time ==
            histories[i].checkins[j].time);
    }
  }
}

TEST_CASE("labeled domains survive a save and reload") {
  testing::TempDir dir("labeled_roundtrip");
  const std::string path = dir.file("checkins.tsv");
  PoiDomain domain;
  domain.n = 3;
  domain.labels = {"cafe", "gym", "office"};
  CheckinHistory history;
  history.user_id = "42";
  history.checkins = {{2, 1.0}, {0, 2.0}, {1, 3.0}, {0, 4.0}};
  save_checkins(path, {history}, domain);
  CHECK(testing::read_text(path).find("office") != std::string::npos);

  const LoadResult reloaded = load_checkins(path, domain);
  REQUIRE(reloaded.histories.size() == 1);
  for (std::size_t i = 0; i < history.size(); ++i) {
    CHECK(reloaded.histories[0].checkins[i].poi == history.checkins[i].poi);
  }

  // The inferred domain resolves the same labels in sorted order.
  const LoadResult inferred = load_checkins(path);
  CHECK(inferred.domain.labels == domain.labels);
}

TEST_CASE("densification is a bijection in sorted order") {
  testing::TempDir dir("densify");
  const std::string path = dir.file("checkins.csv");
  testing::write_text(path, "1,1,10\n1,2,2\n2,1,10\n2,2,banana\n");
  const LoadResult result = load_checkins(path);
  // One non-integer label forces lexicographic order: 10 < 2 < banana.
  REQUIRE(result.domain.n == 3);
  CHECK(result.domain.labels[0] == "10");
  CHECK(result.domain.labels[1] == "2");
  CHECK(result.domain.labels[2] == "banana");
  std::set<std::string> unique(result.domain.labels.begin(),
                               result.domain.labels.end());
  CHECK(unique.size() == 3);
}

TEST_CASE("deterministic alternating chain") {
  Eigen::MatrixXd swap(2, 2);
  swap << 0, 1, 1, 0;
  const auto histories = generate_synthetic(5, 2, 4, swap, 7);
  for (const auto& history : histories) {
    for (std::size_t i = 1; i < history.size(); ++i) {
      CHECK(history.checkins[i].poi != history.checkins[i - 1].poi);
    }
  }
}

TEST_CASE("synthetic generation is deterministic under a fixed seed") {
  const auto a = generate_synthetic(30, 5, 6, "noisy-cycle:0.7", 99);
  const auto b = generate_synthetic(30, 5, 6, "noisy-cycle:0.7", 99);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      CHECK(a[i].checkins[j].poi == b[i].checkins[j].poi);
    }
  }
  const auto c = generate_synthetic(30, 5, 6, "noisy-cycle:0.7", 100);
  bool any_difference = false;
  for (std::size_t i = 0; i < a.size() && !any_difference; ++i) {
    for (std::size_t j = 0; j < a[i].size(); ++j) {
      if (a[i].checkins[j].poi != c[i].checkins[j].poi) {
        any_difference = true;
        break;
      }
    }
  }
  CHECK(any_difference);
}

TEST_CASE("rejects non-stochastic models") {
  Eigen::MatrixXd bad(2, 2);
  bad << 0.6, 0.6, 0.5, 0.5;
  CHECK_THROWS_AS(generate_synthetic(5, 2, 4, bad, 1), std::invalid_argument);
  Eigen::MatrixXd negative(2, 2);
  negative << 1.5, -0.5, 0.5, 0.5;
  CHECK_THROWS_AS(generate_synthetic(5, 2, 4, negative, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_synthetic(1, 2, 4, "random-walk", 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(make_transition_model("no-such-model", 4),
                  std::invalid_argument);
}

TEST_CASE("named models are row stochastic") {
  for (const std::string name :
       {"random-walk", "cycle", "noisy-cycle:0.8", "sticky-cycle:0.3:0.5",
        "zipf:1.0"}) {
    const Eigen::MatrixXd model = make_transition_model(name, 7);
    for (int i = 0; i < 7; ++i) {
      CHECK(model.row(i).sum() == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(model.row(i).minCoeff() >= 0.0);
    }
  }
}

TEST_CASE("empirical transition frequencies converge to the model") {
  const int n = 5;
  const Eigen::MatrixXd model = make_transition_model("noisy-cycle:0.7", n);
  const int m = 6000;
  const int len = 21;  // 120k transitions total
  const auto histories = generate_synthetic(m, n, len, model, 5);
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
  for (const auto& history : histories) {
    for (std::size_t i = 1; i < history.size(); ++i) {
      counts(history.checkins[i - 1].poi, history.checkins[i].poi) += 1;
    }
  }
  for (int i = 0; i < n; ++i) {
    const double row_total = counts.row(i).sum();
    REQUIRE(row_total > 0);
    double l1 = 0;
    for (int j = 0; j < n; ++j) {
      l1 += std::abs(counts(i, j) / row_total - model(i, j));
    }
    CHECK(l1 <= 0.05);
  }
}

TEST_CASE("split keeps the latest check-in as the test item") {
  CheckinHistory history;
  history.user_id = "u";
  history.checkins = {{0, 1}, {1, 2}, {2, 3}};
  const auto [training, heldout] = split_train_test(history);
  CHECK(training.size() == 2);
  CHECK(training.checkins[1].poi == 1);
  CHECK(heldout.poi == 2);

  CheckinHistory two;
  two.checkins = {{4, 1}, {5, 2}};
  const auto [train_one, test_one] = split_train_test(two);
  CHECK(train_one.size() == 1);
  CHECK(test_one.poi == 5);

  CheckinHistory one;
  one.checkins = {{0, 1}};
  CHECK_THROWS_AS(split_train_test(one), std::invalid_argument);
}

TEST_CASE("twenty check-ins leave nineteen for training") {
  const auto histories = generate_synthetic(3, 10, 20, "random-walk", 8);
  const auto [training, heldout] = split_train_test(histories[0]);
  CHECK(training.size() == 19);
}

TEST_CASE("visit counts") {
  CheckinHistory history;
  history.checkins = {{0, 1}, {0, 2}, {1, 3}};
  const VisitCountRow row = extract_visit_counts(history);
  REQUIRE(row.counts.size() == 2);
  CHECK(row.counts[0] == std::pair<int, int>{0, 2});
  CHECK(row.counts[1] == std::pair<int, int>{1, 1});
  CHECK(row.total == 3);
  CHECK(row.max_count() == 2);

  const VisitCountRow empty = extract_visit_counts(CheckinHistory{});
  CHECK(empty.counts.empty());
  CHECK(empty.max_count() == 0);

  CheckinHistory alternating;
  alternating.checkins = {{0, 1}, {1, 2}, {0, 3}, {1, 4}};
  const VisitCountRow ab = extract_visit_counts(alternating);
  CHECK(ab.counts[0].second == 2);
  CHECK(ab.counts[1].second == 2);
}

TEST_CASE("transition sampling is uniform over consecutive pairs") {
  CheckinHistory history;
  history.checkins = {{0, 1}, {1, 2}, {2, 3}};
  Rng rng = make_rng(55);
  int first = 0;
  const int draws = 100'000;
  for (int i = 0; i < draws; ++i) {
    const auto transition = sample_transition(history, rng);
    REQUIRE(transition.has_value());
    if (transition->src == 0) {
      ++first;
    } else {
      CHECK(transition->src == 1);
    }
  }
  CHECK(std::abs(first / double(draws) - 0.5) < 0.01);
}

TEST_CASE("transition sampling edge cases") {
  Rng rng = make_rng(56);
  CheckinHistory self;
  self.checkins = {{3, 1}, {3, 2}};
  const auto transition = sample_transition(self, rng);
  REQUIRE(transition.has_value());
  CHECK(transition->src == 3);
  CHECK(transition->dst == 3);

  CheckinHistory single;
  single.checkins = {{3, 1}};
  CHECK_FALSE(sample_transition(single, rng).has_value());
}

TEST_SUITE_END();

}  // namespace
}  // namespace spirel
