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

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

namespace spirel {

namespace {

std::string trim(const std::string& s) {
  std::size_t begin = 0;
  std::size_t end = s.size();
  while (begin < end && std::isspace(static_cast<unsigned char>(s[begin]))) ++begin;
  while (end > begin && std::isspace(static_cast<unsigned char>(s[end - 1]))) --end;
  return s.substr(begin, end - begin);
}

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
  std::vector<std::string> fields;
  std::string current;
  std::stringstream stream(line);
  while (std::getline(stream, current, delimiter)) {
    fields.push_back(trim(current));
  }
  if (!line.empty() && line.back() == delimiter) fields.emplace_back();
  return fields;
}

bool parse_integral(const std::string& s, long long* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  errno = 0;
  const long long value = std::strtoll(s.c_str(), &end, 10);
  if (errno != 0 || end != s.c_str() + s.size()) return false;
  *out = value;
  return true;
}

bool parse_numeric(const std::string& s, double* out) {
  if (s.empty()) return false;
  char* end = nullptr;
  const double value = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || !std::isfinite(value)) return false;
  *out = value;
  return true;
}

// Days since 1970-01-01 for a proleptic Gregorian date.
long long days_from_civil(int y, int m, int d) {
  y -= m <= 2;
  const long long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                       static_cast<unsigned>(d) - 1u;
  const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
  return era * 146097 + static_cast<long long>(doe) - 719468;
}

// Accepts raw numbers or ISO-8601 timestamps (YYYY-MM-DDTHH:MM:SS, optional
// trailing Z, 'T' or space separator).
bool parse_timestamp(const std::string& s, double* out) {
  if (parse_numeric(s, out)) return true;
  int year, month, day, hour, minute, second;
  char sep;
  if (std::sscanf(s.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d", &year, &month, &day,
                  &sep, &hour, &minute, &second) == 7 &&
      (sep == 'T' || sep == ' ') && month >= 1 && month <= 12 && day >= 1 &&
      day <= 31 && hour >= 0 && hour < 24 && minute >= 0 && minute < 60 &&
      second >= 0 && second < 61) {
    *out = static_cast<double>(days_from_civil(year, month, day)) * 86400.0 +
           hour * 3600.0 + minute * 60.0 + second;
    return true;
  }
  return false;
}

struct RawRecord {
  std::string user;
  double time = 0;
  std::string poi_label;
};

// A record is the 3-column or 5-column layout; anything else fails.
bool parse_record(const std::vector<std::string>& fields, RawRecord* record) {
  if (fields.size() != 3 && fields.size() != 5) return false;
  const std::string& time_field = fields[1];
  if (!parse_timestamp(time_field, &record->time)) return false;
  record->user = fields[0];
  record->poi_label = fields.size() == 3 ? fields[2] : fields[4];
  return record->poi_label.empty() ? false : true;
}

// Observed labels are densified in sorted order: numeric when every label
// parses as an integer, lexicographic otherwise. This keeps ids stable
// across loads and makes save/load a round trip for dense integer labels.
PoiDomain densify(const std::vector<std::string>& observed) {
  std::vector<std::string> labels = observed;
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

  bool all_integral = true;
  std::vector<std::pair<long long, std::string>> numeric;
  numeric.reserve(labels.size());
  for (const auto& label : labels) {
    long long value;
    if (!parse_integral(label, &value)) {
      all_integral = false;
      break;
    }
    numeric.emplace_back(value, label);
  }
  if (all_integral) {
    std::sort(numeric.begin(), numeric.end());
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = numeric[i].second;
  }

  PoiDomain domain;
  domain.n = static_cast<int>(labels.size());
  domain.labels = std::move(labels);
  return domain;
}

LoadResult load_checkins_impl(const std::string& path,
                              const PoiDomain* fixed_domain) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("load_checkins: cannot open " + path);
  }

  std::vector<RawRecord> records;
  std::string line;
  int line_number = 0;
  char delimiter = '\0';
  bool first_content_line = true;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string content = trim(line);
    if (content.empty()) continue;
    if (delimiter == '\0') {
      delimiter = content.find('\t') != std::string::npos ? '\t' : ',';
    }
    RawRecord record;
    if (!parse_record(split_fields(content, delimiter), &record)) {
      if (first_content_line) {
        first_content_line = false;  // header line
        continue;
      }
      throw ParseError("load_checkins: malformed record", line_number);
    }
    first_content_line = false;
    records.push_back(std::move(record));
  }

  // Resolve the POI domain.
  PoiDomain domain;
  std::unordered_map<std::string, int> label_to_id;
  if (fixed_domain != nullptr) {
    domain = *fixed_domain;
    if (domain.has_labels()) {
      for (int i = 0; i < domain.n; ++i) label_to_id[domain.labels[i]] = i;
    }
  } else {
    std::vector<std::string> observed;
    observed.reserve(records.size());
    for (const auto& record : records) observed.push_back(record.poi_label);
    domain = densify(observed);
    for (int i = 0; i < domain.n; ++i) label_to_id[domain.labels[i]] = i;
  }

  auto resolve_poi = [&](const std::string& label) {
    if (!label_to_id.empty()) {
      auto it = label_to_id.find(label);
      if (it == label_to_id.end()) {
        throw std::domain_error("load_checkins: POI label '" + label +
                                "' not in the fixed domain");
      }
      return it->second;
    }
    // Fixed domain without labels: raw ids must already be dense integers.
    long long value;
    if (!parse_integral(label, &value) || value < 0 || value >= domain.n) {
      throw std::domain_error("load_checkins: POI id '" + label +
                              "' outside [0, " + std::to_string(domain.n) +
                              ")");
    }
    return static_cast<int>(value);
  };

  // Group by user in first-appearance order, then sort each history by time.
  std::vector<CheckinHistory> histories;
  std::unordered_map<std::string, std::size_t> user_index;
  for (const auto& record : records) {
    auto [it, inserted] = user_index.emplace(record.user, histories.size());
    if (inserted) {
      histories.push_back(CheckinHistory{record.user, {}});
    }
    histories[it->second].checkins.push_back(
        Checkin{resolve_poi(record.poi_label), record.time});
  }
  for (auto& history : histories) {
    std::stable_sort(
        history.checkins.begin(), history.checkins.end(),
        [](const Checkin& a, const Checkin& b) { return a.time < b.time; });
  }

  LoadResult result;
  result.domain = std::move(domain);
  for (auto& history : histories) {
    if (history.size() < 2) {
      ++result.dropped_users;
    } else {
      result.histories.push_back(std::move(history));
    }
  }
  return result;
}

}  // namespace

int VisitCountRow::max_count() const {
  int best = 0;
  for (const auto& [poi, count] : counts) best = std::max(best, count);
  return best;
}

LoadResult load_checkins(const std::string& path) {
  return load_checkins_impl(path, nullptr);
}

LoadResult load_checkins(const std::string& path, const PoiDomain& domain) {
  return load_checkins_impl(path, &domain);
}

void save_checkins(const std::string& path,
                   const std::vector<CheckinHistory>& histories,
                   const PoiDomain& domain) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("save_checkins: cannot open " + path);
  }
  char time_buffer[64];
  for (const auto& history : histories) {
    for (const auto& checkin : history.checkins) {
      if (checkin.poi < 0 || checkin.poi >= domain.n) {
        throw std::domain_error("save_checkins: POI id out of domain");
      }
      std::snprintf(time_buffer, sizeof(time_buffer), "%.17g", checkin.time);
      out << history.user_id << '\t' << time_buffer << '\t'
          << (domain.has_labels() ? domain.labels[checkin.poi]
                                  : std::to_string(checkin.poi))
          << '\n';
    }
  }
  if (!out) {
    throw std::runtime_error("save_checkins: write failed for " + path);
  }
}

Eigen::MatrixXd make_transition_model(const std::string& name, int n) {
  if (n < 2) {
    throw std::invalid_argument("make_transition_model: need n >= 2");
  }
  std::vector<std::string> parts;
  std::stringstream stream(name);
  std::string part;
  while (std::getline(stream, part, ':')) parts.push_back(part);
  if (parts.empty()) {
    throw std::invalid_argument("make_transition_model: empty model name");
  }

  auto parse_prob = [&](const std::string& s) {
    double value;
    if (!parse_numeric(s, &value) || value < 0 || value > 1) {
      throw std::invalid_argument("make_transition_model: bad probability '" +
                                  s + "' in model '" + name + "'");
    }
    return value;
  };

  const double uniform = 1.0 / n;
  Eigen::MatrixXd model(n, n);
  if (parts[0] == "random-walk" && parts.size() == 1) {
    model.setConstant(uniform);
  } else if (parts[0] == "cycle" && parts.size() == 1) {
    model.setZero();
    for (int i = 0; i < n; ++i) model(i, (i + 1) % n) = 1.0;
  } else if (parts[0] == "noisy-cycle" && parts.size() == 2) {
    const double follow = parse_prob(parts[1]);
    model.setConstant((1.0 - follow) * uniform);
    for (int i = 0; i < n; ++i) model(i, (i + 1) % n) += follow;
  } else if (parts[0] == "sticky-cycle" && parts.size() == 3) {
    const double stay = parse_prob(parts[1]);
    const double advance = parse_prob(parts[2]);
    if (stay + advance > 1.0) {
      throw std::invalid_argument(
          "make_transition_model: sticky-cycle probabilities exceed 1");
    }
    model.setConstant((1.0 - stay - advance) * uniform);
    for (int i = 0; i < n; ++i) {
      model(i, i) += stay;
      model(i, (i + 1) % n) += advance;
    }
  } else if (parts[0] == "sticky-cycle-zipf" && parts.size() == 4) {
    const double stay = parse_prob(parts[1]);
    const double advance = parse_prob(parts[2]);
    double exponent;
    if (!parse_numeric(parts[3], &exponent) || exponent <= 0) {
      throw std::invalid_argument("make_transition_model: bad zipf exponent");
    }
    if (stay + advance > 1.0) {
      throw std::invalid_argument(
          "make_transition_model: sticky-cycle-zipf probabilities exceed 1");
    }
    Eigen::VectorXd weights(n);
    for (int j = 0; j < n; ++j) weights(j) = std::pow(j + 1.0, -exponent);
    weights *= (1.0 - stay - advance) / weights.sum();
    for (int i = 0; i < n; ++i) {
      model.row(i) = weights.transpose();
      model(i, i) += stay;
      model(i, (i + 1) % n) += advance;
    }
  } else if (parts[0] == "zipf" && parts.size() == 2) {
    double exponent;
    if (!parse_numeric(parts[1], &exponent) || exponent <= 0) {
      throw std::invalid_argument("make_transition_model: bad zipf exponent");
    }
    Eigen::VectorXd weights(n);
    for (int j = 0; j < n; ++j) weights(j) = std::pow(j + 1.0, -exponent);
    weights /= weights.sum();
    for (int i = 0; i < n; ++i) model.row(i) = weights.transpose();
  } else {
    throw std::invalid_argument("make_transition_model: unknown model '" +
                                name + "'");
  }
  return model;
}

std::vector<CheckinHistory> generate_synthetic(int m, int n, int len,
                                               const Eigen::MatrixXd& model,
                                               std::uint64_t seed) {
  if (m < 2 || n < 2 || len < 2) {
    throw std::invalid_argument("generate_synthetic: need m, n, len >= 2");
  }
  if (model.rows() != n || model.cols() != n) {
    throw std::invalid_argument("generate_synthetic: model must be n x n");
  }
  // Row-stochastic check plus per-row cumulative sums for inverse sampling.
  std::vector<std::vector<double>> cumulative(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double sum = 0;
    cumulative[i].resize(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
      const double p = model(i, j);
      if (!(p >= -1e-12) || !std::isfinite(p)) {
        throw std::invalid_argument(
            "generate_synthetic: model has a negative or non-finite entry");
      }
      sum += std::max(p, 0.0);
      cumulative[i][static_cast<std::size_t>(j)] = sum;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("generate_synthetic: row " +
                                  std::to_string(i) + " sums to " +
                                  std::to_string(sum) + ", expected 1");
    }
    cumulative[i].back() = 1.0;
  }

  std::vector<CheckinHistory> histories;
  histories.reserve(static_cast<std::size_t>(m));
  for (int user = 0; user < m; ++user) {
    Rng rng = make_rng(seed, static_cast<std::uint64_t>(user));
    CheckinHistory history;
    history.user_id = std::to_string(user);
    history.checkins.reserve(static_cast<std::size_t>(len));
    int poi = static_cast<int>(uniform_index(rng, static_cast<std::size_t>(n)));
    history.checkins.push_back(Checkin{poi, 0.0});
    for (int step = 1; step < len; ++step) {
      const auto& row = cumulative[static_cast<std::size_t>(poi)];
      const double u = uniform_unit(rng);
      poi = static_cast<int>(
          std::upper_bound(row.begin(), row.end(), u) - row.begin());
      if (poi >= n) poi = n - 1;
      history.checkins.push_back(Checkin{poi, static_cast<double>(step)});
    }
    histories.push_back(std::move(history));
  }
  return histories;
}

std::vector<CheckinHistory> generate_synthetic(int m, int n, int len,
                                               const std::string& model_name,
                                               std::uint64_t seed) {
  return generate_synthetic(m, n, len, make_transition_model(model_name, n),
                            seed);
}

std::pair<CheckinHistory, Checkin> split_train_test(
    const CheckinHistory& history) {
  if (history.size() < 2) {
    throw std::invalid_argument(
        "split_train_test: need at least two check-ins");
  }
  CheckinHistory training;
  training.user_id = history.user_id;
  training.checkins.assign(history.checkins.begin(),
                           history.checkins.end() - 1);
  return {std::move(training), history.checkins.back()};
}

VisitCountRow extract_visit_counts(const CheckinHistory& training) {
  std::map<int, int> counts;
  for (const auto& checkin : training.checkins) ++counts[checkin.poi];
  VisitCountRow row;
  row.counts.assign(counts.begin(), counts.end());
  row.total = static_cast<int>(training.size());
  return row;
}

std::optional<Transition> sample_transition(const CheckinHistory& training,
                                            Rng& rng) {
  if (training.size() < 2) return std::nullopt;
  const std::size_t index = uniform_index(rng, training.size() - 1);
  return Transition{training.checkins[index].poi,
                    training.checkins[index + 1].poi};
}

}  // namespace spirel
