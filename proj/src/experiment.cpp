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

#include "spirel/experiment.hpp"

#include <atomic>
#include <bit>
#include <condition_variable>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

namespace spirel {

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const char c : text) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::uint64_t cell_tag(const ExperimentCell& cell) {
  std::uint64_t tag = fnv1a(cell.method);
  tag = splitmix64(tag ^ std::bit_cast<std::uint64_t>(cell.epsilon));
  tag = splitmix64(tag ^ std::bit_cast<std::uint64_t>(cell.split_ratio));
  tag = splitmix64(tag ^ static_cast<std::uint64_t>(cell.iterations));
  return tag;
}

std::string format_double(double value, const char* format) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), format, value);
  return buffer;
}

}  // namespace

ExperimentData prepare_data(const ExperimentConfig& config) {
  ExperimentData data;
  std::vector<CheckinHistory> histories;
  if (config.dataset.source == DatasetSpec::Source::kFile) {
    LoadResult loaded = load_checkins(config.dataset.path);
    histories = std::move(loaded.histories);
    data.n = loaded.domain.n;
    data.dropped_users = loaded.dropped_users;
  } else {
    histories =
        generate_synthetic(config.dataset.m, config.dataset.n,
                           config.dataset.len, config.dataset.model,
                           config.dataset.seed);
    data.n = config.dataset.n;
  }
  data.cases = build_eval_cases(histories);
  data.training.reserve(histories.size());
  data.heldout.reserve(histories.size());
  for (std::size_t i = 0; i < histories.size(); ++i) {
    data.training.push_back(split_train_test(histories[i]).first);
    data.heldout.push_back(data.cases[i].heldout_poi);
  }
  data.descriptor = config.dataset.describe();
  return data;
}

std::vector<ExperimentCell> enumerate_cells(const ExperimentConfig& config,
                                            bool sweep) {
  std::vector<double> epsilons{config.epsilon};
  std::vector<double> splits{config.split_ratio};
  std::vector<int> iteration_counts{config.trainer.iterations};
  if (sweep) {
    if (!config.sweep_epsilons.empty()) epsilons = config.sweep_epsilons;
    if (!config.sweep_split_ratios.empty()) splits = config.sweep_split_ratios;
    if (!config.sweep_iteration_counts.empty()) {
      iteration_counts = config.sweep_iteration_counts;
    }
  }
  std::vector<ExperimentCell> cells;
  for (const auto& method : config.methods) {
    for (const double epsilon : epsilons) {
      for (const double split : splits) {
        for (const int iterations : iteration_counts) {
          cells.push_back(ExperimentCell{method, epsilon, split, iterations});
        }
      }
    }
  }
  return cells;
}

MetricsReport run_cell(const ExperimentData& data,
                       const ExperimentConfig& config,
                       const ExperimentCell& cell) {
  MetricsReport report;
  report.method = cell.method;
  report.dataset = data.descriptor;
  report.epsilon = cell.epsilon;
  report.split_ratio = cell.split_ratio;
  report.iterations = cell.iterations;
  report.seed_count = static_cast<int>(config.seeds.size());
  report.evaluated_users = static_cast<int>(data.cases.size());
  for (const int k : config.metric_ks) report.recall_at[k] = 0;

  TrainConfig trainer = config.trainer;
  trainer.iterations = cell.iterations;
  trainer.budget = split_budget(cell.epsilon, cell.split_ratio);
  if (cell.method != "spirel") trainer.d = config.effective_baseline_d();
  report.d = trainer.d;

  const std::uint64_t tag = cell_tag(cell);
  for (const std::uint64_t seed : config.seeds) {
    const std::uint64_t run_seed = derive_seed(seed, tag);
    TrainResult result;
    if (cell.method == "spirel") {
      result = train_spirel(data.training, data.n, trainer, run_seed);
    } else if (cell.method == "npb") {
      result = train_npb(data.training, data.n, trainer, run_seed);
    } else if (cell.method == "pb") {
      result = train_pb(data.training, data.n, trainer, run_seed);
    } else {
      throw std::invalid_argument("run_cell: unknown method " + cell.method);
    }
    const auto rankings =
        rank_users(result, data.cases, cell.method == "spirel");
    for (const int k : config.metric_ks) {
      report.recall_at[k] += recall_at_k(rankings, data.heldout, k);
    }
    report.mrr += mean_reciprocal_rank(rankings, data.heldout);
  }
  const double runs = static_cast<double>(config.seeds.size());
  for (auto& [k, value] : report.recall_at) value /= runs;
  report.mrr /= runs;
  return report;
}

void append_metrics_rows(std::ostream& out, const MetricsReport& report,
                         const std::vector<int>& ks) {
  for (const int k : ks) {
    out << report.method << ',' << report.dataset << ','
        << format_double(report.epsilon, "%g") << ','
        << format_double(report.split_ratio, "%g") << ',' << report.iterations
        << ',' << report.d << ',' << report.seed_count << ',' << k << ','
        << format_double(report.recall_at.at(k), "%.6f") << ','
        << format_double(report.mrr, "%.6f") << '\n';
  }
}

std::vector<MetricsReport> run_experiment(const ExperimentConfig& config,
                                          bool sweep, std::ostream& csv,
                                          int jobs, std::ostream* progress) {
  const ExperimentData data = prepare_data(config);
  for (const int k : config.metric_ks) {
    if (k > data.n) {
      throw ConfigError("config: key 'eval.ks' has k = " + std::to_string(k) +
                        " above the POI count " + std::to_string(data.n));
    }
  }
  if (progress != nullptr && data.dropped_users > 0) {
    *progress << "warning: dropped " << data.dropped_users
              << " users with fewer than two check-ins\n";
  }
  const std::vector<ExperimentCell> cells = enumerate_cells(config, sweep);
  csv << kMetricsCsvHeader << '\n';
  csv.flush();

  std::vector<std::optional<MetricsReport>> results(cells.size());
  std::mutex mutex;
  std::condition_variable done_signal;
  std::atomic<std::size_t> next_cell{0};
  std::exception_ptr failure;
  bool stop = false;

  auto worker = [&]() {
    while (true) {
      const std::size_t index = next_cell.fetch_add(1);
      if (index >= cells.size()) return;
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (stop) return;
      }
      try {
        MetricsReport report = run_cell(data, config, cells[index]);
        std::lock_guard<std::mutex> lock(mutex);
        results[index] = std::move(report);
        done_signal.notify_all();
      } catch (...) {
        std::lock_guard<std::mutex> lock(mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
        done_signal.notify_all();
        return;
      }
    }
  };

  const int thread_count =
      std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(thread_count));
  for (int t = 0; t < thread_count; ++t) threads.emplace_back(worker);

  // Flush completed cells in deterministic order as they become available.
  std::vector<MetricsReport> reports;
  {
    std::unique_lock<std::mutex> lock(mutex);
    for (std::size_t index = 0; index < cells.size(); ++index) {
      done_signal.wait(lock,
                       [&] { return results[index].has_value() || stop; });
      if (!results[index].has_value()) break;
      append_metrics_rows(csv, *results[index], config.metric_ks);
      csv.flush();
      if (progress != nullptr) {
        *progress << "cell " << (index + 1) << "/" << cells.size() << " "
                  << cells[index].method << " eps="
                  << format_double(cells[index].epsilon, "%g") << " done\n";
        progress->flush();
      }
      reports.push_back(std::move(*results[index]));
    }
  }
  for (auto& thread : threads) thread.join();
  if (failure) std::rethrow_exception(failure);
  return reports;
}

}  // namespace spirel
