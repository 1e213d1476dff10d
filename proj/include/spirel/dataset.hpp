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

#ifndef SPIREL_DATASET_HPP_
#define SPIREL_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "spirel/random.hpp"

// Check-in ingestion, synthetic Markov-mobility generation and the
// client-side feature extraction (visit counts, transition sampling).

namespace spirel {

// Parse failure with the 1-based line number of the offending record.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, int line)
      : std::runtime_error(message + " (line " + std::to_string(line) + ")"),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// The POI universe: ids are dense integers [0, n). `labels`, when non-empty,
// maps each dense id back to the raw label it was observed under.
struct PoiDomain {
  int n = 0;
  std::vector<std::string> labels;

  bool has_labels() const { return !labels.empty(); }
};

struct Checkin {
  int poi = 0;
  double time = 0;
};

// One user's time-ordered private check-in sequence. Never leaves the
// simulated client once feature extraction starts.
struct CheckinHistory {
  std::string user_id;
  std::vector<Checkin> checkins;

  std::size_t size() const { return checkins.size(); }
};

// Sparse per-user visit counts over the training prefix, sorted by POI id.
struct VisitCountRow {
  std::vector<std::pair<int, int>> counts;
  int total = 0;

  int max_count() const;
};

// A consecutive POI pair from one history.
struct Transition {
  int src = 0;
  int dst = 0;
};

struct LoadResult {
  std::vector<CheckinHistory> histories;
  PoiDomain domain;
  // Users discarded because they had fewer than two check-ins.
  int dropped_users = 0;
};

// Reads a check-in text file. Two record layouts are accepted, with the
// delimiter auto-detected from {tab, comma}:
//   user_id <sep> timestamp <sep> poi_id
//   user_id <sep> timestamp <sep> lat <sep> lon <sep> location_id
// Timestamps are either numeric or ISO-8601 (YYYY-MM-DDTHH:MM:SSZ). A first
// line whose timestamp field does not parse is treated as a header. Raw POI
// labels are densified to [0, n) in sorted label order (numeric when every
// label is an integer, lexicographic otherwise). Histories are sorted by
// time per user; users with fewer than two check-ins are dropped and
// counted.
LoadResult load_checkins(const std::string& path);

// Same, but against a fixed domain: labels outside it raise
// std::domain_error instead of extending the densification.
LoadResult load_checkins(const std::string& path, const PoiDomain& domain);

// Writes histories in the three-column tab-separated layout, using the
// domain labels when present (dense ids otherwise). Reloading the file with
// the same domain yields identical histories.
void save_checkins(const std::string& path,
                   const std::vector<CheckinHistory>& histories,
                   const PoiDomain& domain);

// Builds a named row-stochastic transition model over n POIs:
//   "random-walk"                  uniform next POI
//   "cycle"                        deterministic i -> i+1 (mod n)
//   "noisy-cycle:<p>"              i -> i+1 with prob p, else uniform
//   "sticky-cycle:<p_stay>:<p_next>"
//                                  i -> i with p_stay, i -> i+1 with p_next,
//                                  else uniform
//   "sticky-cycle-zipf:<p_stay>:<p_next>:<s>"
//                                  like sticky-cycle, but exploration follows
//                                  the Zipf(s) popularity law instead of the
//                                  uniform one
//   "zipf:<s>"                     every row is the Zipf(s) popularity law
Eigen::MatrixXd make_transition_model(const std::string& name, int n);

// Draws m first-order Markov check-in histories of length `len` from a
// row-stochastic model; first POI uniform, timestamps 0..len-1.
// Deterministic under a fixed seed. Throws std::invalid_argument when the
// model is not row-stochastic (rows must sum to 1 within 1e-9) or any
// dimension is out of range.
std::vector<CheckinHistory> generate_synthetic(int m, int n, int len,
                                               const Eigen::MatrixXd& model,
                                               std::uint64_t seed);
std::vector<CheckinHistory> generate_synthetic(int m, int n, int len,
                                               const std::string& model_name,
                                               std::uint64_t seed);

// Splits off the latest check-in as the held-out test item; the remaining
// prefix is the training history. Requires at least two check-ins.
std::pair<CheckinHistory, Checkin> split_train_test(
    const CheckinHistory& history);

VisitCountRow extract_visit_counts(const CheckinHistory& training);

// Uniform draw over the history's consecutive pairs; nullopt when the
// history holds fewer than two check-ins.
std::optional<Transition> sample_transition(const CheckinHistory& training,
                                            Rng& rng);

}  // namespace spirel

#endif  // SPIREL_DATASET_HPP_
