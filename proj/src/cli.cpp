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

#include "spirel/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "spirel/checkpoint.hpp"
#include "spirel/config.hpp"
#include "spirel/experiment.hpp"
#include "spirel/transition.hpp"

namespace spirel::cli {

namespace {

namespace fs = std::filesystem;

ExperimentConfig load_config_or_defaults(const std::string& path) {
  if (path.empty()) return ExperimentConfig{};
  return parse_config(path);
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open output file " + path.string());
  }
  return out;
}

int command_generate(int m, int n, int len, const std::string& model,
                     std::uint64_t seed, const std::string& out_path) {
  const auto histories = generate_synthetic(m, n, len, model, seed);
  PoiDomain domain;
  domain.n = n;
  fs::path path(out_path);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  save_checkins(out_path, histories, domain);
  std::cerr << "wrote " << histories.size() << " users over " << n
            << " POIs to " << out_path << "\n";
  return 0;
}

int command_train(const std::string& config_path, const std::string& method,
                  std::int64_t seed_override, bool no_privacy,
                  const std::string& output_dir) {
  ExperimentConfig config = load_config_or_defaults(config_path);
  const std::uint64_t seed = seed_override >= 0
                                 ? static_cast<std::uint64_t>(seed_override)
                                 : config.seeds.front();
  const ExperimentData data = prepare_data(config);

  TrainConfig trainer = config.trainer;
  trainer.budget = split_budget(config.epsilon, config.split_ratio);
  trainer.no_privacy = no_privacy;
  if (method != "spirel") trainer.d = config.effective_baseline_d();

  if (data.dropped_users > 0) {
    std::cerr << "warning: dropped " << data.dropped_users
              << " users with fewer than two check-ins\n";
  }
  std::cerr << "training " << method << " on " << data.training.size()
            << " users, " << data.n << " POIs (seed " << seed
            << (no_privacy ? ", no-privacy diagnostic" : "") << ")\n";

  TrainResult result;
  if (method == "spirel") {
    result = train_spirel(data.training, data.n, trainer, seed);
  } else if (method == "npb") {
    result = train_npb(data.training, data.n, trainer, seed);
  } else if (method == "pb") {
    result = train_pb(data.training, data.n, trainer, seed);
  } else {
    throw std::runtime_error("unknown method '" + method + "'");
  }

  const fs::path out_dir(output_dir.empty() ? "." : output_dir);
  fs::create_directories(out_dir);
  write_model_checkpoint((out_dir / "model.bin").string(), result.model);
  std::cerr << "checkpoint: " << (out_dir / "model.bin").string() << "\n";
  if (result.transitions.raw.size() > 0) {
    write_square_matrix((out_dir / "transitions.bin").string(),
                        result.transitions.raw);
    std::cerr << "transition dump: " << (out_dir / "transitions.bin").string()
              << "\n";
  }
  if (!result.trace.empty()) {
    std::ofstream trace = open_output(out_dir / "trace.csv");
    trace << "iteration,p_rmse,q_rmse\n";
    for (const auto& row : result.trace) {
      char buffer[96];
      std::snprintf(buffer, sizeof(buffer), "%d,%.9g,%.9g", row.iteration,
                    row.p_rmse, row.q_rmse);
      trace << buffer << '\n';
    }
    std::cerr << "trace: " << (out_dir / "trace.csv").string() << "\n";
  }
  return 0;
}

int command_run(const std::string& config_path, const std::string& output_dir,
                std::int64_t seed_override, int jobs, bool sweep) {
  ExperimentConfig config = load_config_or_defaults(config_path);
  if (seed_override >= 0) {
    config.seeds = {static_cast<std::uint64_t>(seed_override)};
  }
  const fs::path out_dir(output_dir.empty() ? "." : output_dir);
  fs::create_directories(out_dir);
  const fs::path csv_path = out_dir / (sweep ? "sweep.csv" : "metrics.csv");
  std::ofstream csv = open_output(csv_path);
  run_experiment(config, sweep, csv, jobs, &std::cerr);
  std::cerr << "metrics: " << csv_path.string() << "\n";
  return 0;
}

int command_inspect(const std::string& path, bool as_matrix) {
  if (as_matrix) {
    const Eigen::MatrixXd matrix = read_square_matrix(path);
    std::cout << "square matrix dump: " << path << "\n"
              << "  n: " << matrix.rows() << "\n"
              << "  min: " << matrix.minCoeff() << "\n"
              << "  max: " << matrix.maxCoeff() << "\n"
              << "  frobenius: " << matrix.norm() << "\n";
    return 0;
  }
  const LatentModel model = read_model_checkpoint(path);
  std::cout << "model checkpoint: " << path << "\n"
            << "  POIs: " << model.n() << "\n"
            << "  latent dimension: " << model.d() << "\n"
            << "  optimizer steps: " << model.adam.step << "\n"
            << "  factor min: " << model.poi_factors.minCoeff() << "\n"
            << "  factor max: " << model.poi_factors.maxCoeff() << "\n"
            << "  factor frobenius: " << model.poi_factors.norm() << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Locally private successive point-of-interest recommendation"};
  app.require_subcommand(1);

  // generate
  auto* generate = app.add_subcommand(
      "generate", "Write a synthetic Markov-mobility check-in dataset");
  int gen_m = 10000;
  int gen_n = 373;
  int gen_len = 20;
  std::string gen_model = "random-walk";
  std::uint64_t gen_seed = 1;
  std::string gen_out = "checkins.tsv";
  generate->add_option("--m", gen_m, "number of users");
  generate->add_option("--n", gen_n, "number of POIs");
  generate->add_option("--len", gen_len, "check-ins per user");
  generate->add_option("--model", gen_model,
                       "transition model (random-walk, cycle, "
                       "noisy-cycle:<p>, sticky-cycle:<p>:<q>, zipf:<s>)");
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--out", gen_out, "output path");

  // train
  auto* train = app.add_subcommand(
      "train", "Train one method and write a model checkpoint");
  std::string train_config;
  std::string train_method = "spirel";
  std::string train_output = ".";
  std::int64_t train_seed = -1;
  bool train_no_privacy = false;
  train->add_option("--config", train_config, "configuration file");
  train->add_option("--method", train_method, "spirel, npb or pb")
      ->check(CLI::IsMember({"spirel", "npb", "pb"}));
  train->add_option("--output", train_output, "output directory");
  train->add_option("--seed", train_seed, "seed override")
      ->check(CLI::NonNegativeNumber);
  train->add_flag("--no-privacy", train_no_privacy,
                  "diagnostic mode: exact terms, RMSE trace, no guarantees");

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Train and evaluate the configured methods; write CSV");
  std::string eval_config;
  std::string eval_output = ".";
  std::int64_t eval_seed = -1;
  int eval_jobs = 1;
  evaluate->add_option("--config", eval_config, "configuration file");
  evaluate->add_option("--output", eval_output, "output directory");
  evaluate->add_option("--seed", eval_seed, "single-seed override")
      ->check(CLI::NonNegativeNumber);
  evaluate->add_option("--jobs", eval_jobs, "parallel experiment cells")
      ->check(CLI::PositiveNumber);

  // sweep
  auto* sweep = app.add_subcommand(
      "sweep", "Run the full experiment matrix from the [sweep] axes");
  std::string sweep_config;
  std::string sweep_output = ".";
  std::int64_t sweep_seed = -1;
  int sweep_jobs = 1;
  sweep->add_option("--config", sweep_config, "configuration file");
  sweep->add_option("--output", sweep_output, "output directory");
  sweep->add_option("--seed", sweep_seed, "single-seed override")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--jobs", sweep_jobs, "parallel experiment cells")
      ->check(CLI::PositiveNumber);

  // inspect
  auto* inspect =
      app.add_subcommand("inspect", "Summarize a checkpoint file");
  std::string inspect_path;
  bool inspect_matrix = false;
  inspect->add_option("path", inspect_path, "checkpoint path")->required();
  inspect->add_flag("--matrix", inspect_matrix,
                    "treat the file as a square matrix dump");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& error) {
    return app.exit(error);
  }

  try {
    if (generate->parsed()) {
      return command_generate(gen_m, gen_n, gen_len, gen_model, gen_seed,
                              gen_out);
    }
    if (train->parsed()) {
      return command_train(train_config, train_method, train_seed,
                           train_no_privacy, train_output);
    }
    if (evaluate->parsed()) {
      return command_run(eval_config, eval_output, eval_seed, eval_jobs,
                         /*sweep=*/false);
    }
    if (sweep->parsed()) {
      return command_run(sweep_config, sweep_output, sweep_seed, sweep_jobs,
                         /*sweep=*/true);
    }
    if (inspect->parsed()) {
      return command_inspect(inspect_path, inspect_matrix);
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace spirel::cli
