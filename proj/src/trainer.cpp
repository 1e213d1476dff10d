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

#include "spirel/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace spirel {

namespace {

// Independent derived-seed streams so that reordering one phase never
// perturbs another.
constexpr std::uint64_t kModelStream = 1;
constexpr std::uint64_t kProfileStream = 2;
constexpr std::uint64_t kTransitionStream = 3;
constexpr std::uint64_t kGroupStream = 4;
constexpr std::uint64_t kGradientStream = 5;
constexpr std::uint64_t kSgdOrderStream = 6;

constexpr double kDivergenceBound = 1e3;

void check_config(const TrainConfig& config) {
  if (config.d < 1) throw std::invalid_argument("train: need d >= 1");
  if (config.iterations < 1) {
    throw std::invalid_argument("train: need iterations >= 1");
  }
  if (!(config.lambda >= 0) || !std::isfinite(config.lambda)) {
    throw std::invalid_argument("train: lambda must be non-negative");
  }
  if (!(config.gamma > 0) || !std::isfinite(config.gamma)) {
    throw std::invalid_argument("train: gamma must be positive");
  }
  if (!(config.beta1 >= 0 && config.beta1 < 1) ||
      !(config.beta2 >= 0 && config.beta2 < 1)) {
    throw std::invalid_argument("train: adam betas must lie in [0, 1)");
  }
  if (!(config.adam_epsilon > 0)) {
    throw std::invalid_argument("train: adam epsilon must be positive");
  }
  if (!(config.sigmoid_scale > 0)) {
    throw std::invalid_argument("train: sigmoid_scale must be positive");
  }
}

void check_budget(const PrivacyBudget& budget) {
  if (!(budget.transition_epsilon > 0) || !(budget.gradient_epsilon > 0) ||
      !(budget.total_epsilon > 0)) {
    throw std::invalid_argument("train: budget parts must be positive");
  }
  const double sum = budget.transition_epsilon + budget.gradient_epsilon;
  if (std::abs(sum - budget.total_epsilon) >
      1e-9 * std::max(1.0, budget.total_epsilon)) {
    throw std::invalid_argument(
        "train: budget parts do not sum to the total epsilon");
  }
}

Eigen::MatrixXd uniform_matrix(int rows, int cols, double hi, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      m(i, j) = uniform_range(rng, 0.0, hi);
    }
  }
  return m;
}

double rmse(const Eigen::MatrixXd& target, const Eigen::MatrixXd& approx) {
  return std::sqrt((target - approx).squaredNorm() /
                   static_cast<double>(target.size()));
}

// Shared per-iteration ALS machinery: factor (V^T V + lambda I) once, then
// solve every client row against it.
class AlsSolver {
 public:
  AlsSolver(const Eigen::MatrixXd& poi_factors, double lambda)
      : poi_factors_(poi_factors) {
    Eigen::MatrixXd gram = poi_factors.transpose() * poi_factors;
    gram.diagonal().array() += lambda;
    ldlt_.compute(gram);
    // With lambda > 0 the system is positive definite by construction; a
    // vanishing pivot can only mean a rank-deficient unregularized system.
    if (lambda == 0.0) {
      const Eigen::VectorXd diag = ldlt_.vectorD().cwiseAbs();
      if (diag.minCoeff() <= 1e-13 * std::max(diag.maxCoeff(), 1e-300)) {
        throw std::runtime_error(
            "als_update_user: singular system; provide lambda > 0 or a "
            "full-rank factor matrix");
      }
    }
  }

  Eigen::VectorXd solve(
      const std::vector<std::pair<int, double>>& normalized_visits) const {
    const int d = static_cast<int>(poi_factors_.cols());
    Eigen::VectorXd projected = Eigen::VectorXd::Zero(d);
    for (const auto& [poi, value] : normalized_visits) {
      projected.noalias() += value * poi_factors_.row(poi).transpose();
    }
    return ldlt_.solve(projected);
  }

 private:
  const Eigen::MatrixXd& poi_factors_;
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

void refresh_user_factors(std::vector<PrivateProfile>& profiles,
                          const Eigen::MatrixXd& poi_factors, double lambda) {
  const AlsSolver solver(poi_factors, lambda);
  for (auto& profile : profiles) {
    if (!profile.normalized_visits.empty()) {
      profile.user_factors = solver.solve(profile.normalized_visits);
    }
  }
}

std::vector<PrivateProfile> make_profiles(
    const std::vector<CheckinHistory>& training, int n, int d,
    std::uint64_t seed) {
  std::vector<PrivateProfile> profiles;
  profiles.reserve(training.size());
  const std::uint64_t base = derive_seed(seed, kProfileStream);
  for (std::size_t i = 0; i < training.size(); ++i) {
    for (const auto& checkin : training[i].checkins) {
      if (checkin.poi < 0 || checkin.poi >= n) {
        throw std::domain_error("train: check-in POI outside [0, n)");
      }
    }
    profiles.push_back(make_profile(training[i], d, derive_seed(base, i)));
  }
  return profiles;
}

}  // namespace

LatentModel init_model(int n, int d, std::uint64_t seed) {
  if (n < 1 || d < 1) {
    throw std::invalid_argument("init_model: need n, d >= 1");
  }
  Rng rng = make_rng(seed, kModelStream);
  LatentModel model;
  model.poi_factors = uniform_matrix(n, d, 1.0 / std::sqrt(double(d)), rng);
  model.adam.first_moment = Eigen::MatrixXd::Zero(n, d);
  model.adam.second_moment = Eigen::MatrixXd::Zero(n, d);
  model.adam.step = 0;
  return model;
}

Eigen::VectorXd init_profile(int d, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("init_profile: need d >= 1");
  Rng rng = make_rng(seed, kModelStream);
  return uniform_matrix(d, 1, 1.0 / std::sqrt(double(d)), rng).col(0);
}

PrivateProfile make_profile(const CheckinHistory& training, int d,
                            std::uint64_t seed) {
  PrivateProfile profile;
  profile.visits = extract_visit_counts(training);
  const int max_count = profile.visits.max_count();
  if (max_count > 0) {
    profile.normalized_visits.reserve(profile.visits.counts.size());
    for (const auto& [poi, count] : profile.visits.counts) {
      profile.normalized_visits.emplace_back(
          poi, static_cast<double>(count) / max_count);
    }
  }
  profile.user_factors = init_profile(d, seed);
  return profile;
}

Eigen::VectorXd als_update_user(const PrivateProfile& profile,
                                const Eigen::MatrixXd& poi_factors,
                                double lambda) {
  const AlsSolver solver(poi_factors, lambda);
  if (profile.normalized_visits.empty()) {
    return Eigen::VectorXd::Zero(poi_factors.cols());
  }
  return solver.solve(profile.normalized_visits);
}

GradientReport client_gradient_report(const PrivateProfile& profile,
                                      const Eigen::MatrixXd& poi_factors,
                                      double epsilon2, Rng& rng) {
  const int n = static_cast<int>(poi_factors.rows());
  const int d = static_cast<int>(poi_factors.cols());
  if (profile.user_factors.size() != d) {
    throw std::invalid_argument(
        "client_gradient_report: profile dimension mismatch");
  }
  if (profile.user_factors.cwiseAbs().maxCoeff() > kDivergenceBound) {
    throw std::runtime_error(
        "client_gradient_report: user factors diverged beyond 1e3");
  }
  const PmParams pm = make_pm_params(epsilon2);
  const int dim = static_cast<int>(uniform_index(rng, d));
  const double factor_at_dim = profile.user_factors(dim);

  Eigen::VectorXd predictions = poi_factors * profile.user_factors;
  GradientReport report;
  report.dim = dim;
  report.contributions.resize(n);
  auto visit = profile.normalized_visits.begin();
  for (int poi = 0; poi < n; ++poi) {
    double rating = 0;
    if (visit != profile.normalized_visits.end() && visit->first == poi) {
      rating = visit->second;
      ++visit;
    }
    const double error =
        std::clamp(rating - predictions(poi), -1.0, 1.0);
    const double perturbed = pm_perturb(error, pm, rng);
    report.contributions(poi) = d * perturbed * factor_at_dim;
  }
  return report;
}

Eigen::MatrixXd estimate_user_gradient_term(
    const std::vector<GradientReport>& reports, int n, int d,
    double population_scale) {
  if (reports.empty()) {
    throw std::runtime_error(
        "estimate_user_gradient_term: no reports scheduled for this round");
  }
  Eigen::MatrixXd term = Eigen::MatrixXd::Zero(n, d);
  for (const auto& report : reports) {
    if (report.contributions.size() != n || report.dim < 0 ||
        report.dim >= d) {
      throw std::runtime_error(
          "estimate_user_gradient_term: malformed report");
    }
    term.col(report.dim) += report.contributions;
  }
  return -2.0 * population_scale * term;
}

Eigen::MatrixXd exact_user_gradient_term(const Eigen::MatrixXd& preferences,
                                         const Eigen::MatrixXd& user_factors,
                                         const Eigen::MatrixXd& poi_factors) {
  const Eigen::MatrixXd residual =
      preferences - user_factors * poi_factors.transpose();
  return -2.0 * residual.transpose() * user_factors;
}

Eigen::MatrixXd transition_gradient_term(const Eigen::MatrixXd& q_normalized,
                                         const Eigen::MatrixXd& poi_factors) {
  const Eigen::MatrixXd residual =
      q_normalized - poi_factors * poi_factors.transpose();
  return -2.0 * (residual + residual.transpose()) * poi_factors;
}

Eigen::MatrixXd joint_gradient_poi(const Eigen::MatrixXd& preferences,
                                   const Eigen::MatrixXd& user_factors,
                                   const Eigen::MatrixXd& q_normalized,
                                   const Eigen::MatrixXd& poi_factors,
                                   double lambda) {
  return exact_user_gradient_term(preferences, user_factors, poi_factors) +
         transition_gradient_term(q_normalized, poi_factors) +
         2.0 * lambda * poi_factors;
}

double joint_objective(const Eigen::MatrixXd& preferences,
                       const Eigen::MatrixXd& user_factors,
                       const Eigen::MatrixXd& q_normalized,
                       const Eigen::MatrixXd& poi_factors, double lambda) {
  const double p_part =
      (preferences - user_factors * poi_factors.transpose()).squaredNorm();
  const double q_part =
      (q_normalized - poi_factors * poi_factors.transpose()).squaredNorm();
  return p_part + q_part +
         lambda * (user_factors.squaredNorm() + poi_factors.squaredNorm());
}

void apply_gradient_step(LatentModel& model, const Eigen::MatrixXd& gradient,
                         const TrainConfig& config) {
  if (gradient.rows() != model.poi_factors.rows() ||
      gradient.cols() != model.poi_factors.cols()) {
    throw std::invalid_argument("apply_gradient_step: shape mismatch");
  }
  if (config.optimizer == Optimizer::kSgd) {
    model.poi_factors -= config.gamma * gradient;
    return;
  }
  AdamState& adam = model.adam;
  adam.step += 1;
  adam.first_moment =
      config.beta1 * adam.first_moment + (1.0 - config.beta1) * gradient;
  adam.second_moment = config.beta2 * adam.second_moment +
                       (1.0 - config.beta2) * gradient.cwiseProduct(gradient);
  const double first_correction =
      1.0 - std::pow(config.beta1, static_cast<double>(adam.step));
  const double second_correction =
      1.0 - std::pow(config.beta2, static_cast<double>(adam.step));
  const Eigen::MatrixXd first_hat = adam.first_moment / first_correction;
  const Eigen::MatrixXd second_hat = adam.second_moment / second_correction;
  model.poi_factors -=
      config.gamma *
      first_hat.cwiseQuotient(
          second_hat.cwiseSqrt().array().unaryExpr([&](double x) {
            return x + config.adam_epsilon;
          }).matrix());
}

void server_update_poi_factors(const std::vector<GradientReport>& reports,
                               LatentModel& model,
                               const Eigen::MatrixXd& q_normalized,
                               const TrainConfig& config, int total_users,
                               int group_size) {
  if (group_size < 1 || total_users < group_size) {
    throw std::invalid_argument("server_update_poi_factors: bad group sizes");
  }
  if (q_normalized.rows() != model.n() || q_normalized.cols() != model.n()) {
    throw std::invalid_argument(
        "server_update_poi_factors: transition matrix shape mismatch");
  }
  const double scale =
      static_cast<double>(total_users) / static_cast<double>(group_size);
  const Eigen::MatrixXd gradient =
      estimate_user_gradient_term(reports, model.n(), model.d(), scale) +
      transition_gradient_term(q_normalized, model.poi_factors) +
      2.0 * config.lambda * model.poi_factors;
  apply_gradient_step(model, gradient, config);
}

std::vector<int> partition_groups(int user_count, int k, std::uint64_t seed) {
  if (k < 1 || k > user_count) {
    throw std::invalid_argument(
        "partition_groups: k must lie in [1, user_count]");
  }
  std::vector<int> order(static_cast<std::size_t>(user_count));
  std::iota(order.begin(), order.end(), 0);
  Rng rng = make_rng(seed, kGroupStream);
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[uniform_index(rng, i)]);
  }
  std::vector<int> assignment(static_cast<std::size_t>(user_count));
  for (std::size_t position = 0; position < order.size(); ++position) {
    assignment[static_cast<std::size_t>(order[position])] =
        static_cast<int>(position % static_cast<std::size_t>(k));
  }
  return assignment;
}

Eigen::MatrixXd build_preference_matrix(
    const std::vector<PrivateProfile>& profiles, int n) {
  Eigen::MatrixXd preferences =
      Eigen::MatrixXd::Zero(static_cast<int>(profiles.size()), n);
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    for (const auto& [poi, value] : profiles[i].normalized_visits) {
      preferences(static_cast<int>(i), poi) = value;
    }
  }
  return preferences;
}

Eigen::MatrixXd build_user_matrix(
    const std::vector<PrivateProfile>& profiles) {
  if (profiles.empty()) return Eigen::MatrixXd();
  Eigen::MatrixXd user_factors(static_cast<int>(profiles.size()),
                               profiles.front().user_factors.size());
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    user_factors.row(static_cast<int>(i)) = profiles[i].user_factors;
  }
  return user_factors;
}

TrainResult train_spirel(const std::vector<CheckinHistory>& training, int n,
                         const TrainConfig& config, std::uint64_t seed) {
  check_config(config);
  if (training.empty()) {
    throw std::invalid_argument("train_spirel: need at least one client");
  }
  const int m = static_cast<int>(training.size());
  if (!config.no_privacy) {
    check_budget(config.budget);
    if (config.iterations > m) {
      throw std::invalid_argument(
          "train_spirel: more groups than users; lower iterations");
    }
  }

  TrainResult result;
  result.profiles = make_profiles(training, n, config.d, seed);

  // Round one: every client reports its sampled transition once.
  const std::uint64_t transition_base = derive_seed(seed, kTransitionStream);
  if (config.no_privacy) {
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < m; ++i) {
      Rng rng = make_rng(transition_base, static_cast<std::uint64_t>(i));
      if (auto transition = sample_transition(training[i], rng)) {
        counts(transition->src, transition->dst) += 1.0;
      }
    }
    result.transitions.raw = std::move(counts);
  } else {
    const double epsilon1 = config.budget.transition_epsilon;
    TransitionAggregator aggregator(n, epsilon1);
    for (int i = 0; i < m; ++i) {
      Rng rng = make_rng(transition_base, static_cast<std::uint64_t>(i));
      const auto transition = sample_transition(training[i], rng);
      aggregator.add(client_report(transition, n, epsilon1, rng));
      result.profiles[i].ledger.transition_spent += epsilon1;
      result.profiles[i].ledger.transition_reports += 1;
    }
    result.transitions.raw = aggregator.estimate();
  }
  result.transitions.normalized =
      normalize_transitions(result.transitions.raw, config.sigmoid_scale);
  const Eigen::MatrixXd& q_normalized = result.transitions.normalized;

  // Round two: joint factorization.
  result.model = init_model(n, config.d, seed);
  std::vector<int> groups;
  if (!config.no_privacy) {
    groups = partition_groups(m, config.iterations,
                              derive_seed(seed, kGroupStream));
  }
  const std::uint64_t gradient_base = derive_seed(seed, kGradientStream);

  refresh_user_factors(result.profiles, result.model.poi_factors,
                       config.lambda);
  for (int iteration = 0; iteration < config.iterations; ++iteration) {
    if (config.no_privacy) {
      const Eigen::MatrixXd preferences =
          build_preference_matrix(result.profiles, n);
      const Eigen::MatrixXd user_factors = build_user_matrix(result.profiles);
      const Eigen::MatrixXd gradient =
          joint_gradient_poi(preferences, user_factors, q_normalized,
                             result.model.poi_factors, config.lambda);
      apply_gradient_step(result.model, gradient, config);
    } else {
      const double epsilon2 = config.budget.gradient_epsilon;
      std::vector<GradientReport> reports;
      int group_size = 0;
      for (int i = 0; i < m; ++i) {
        if (groups[static_cast<std::size_t>(i)] != iteration) continue;
        ++group_size;
        Rng rng = make_rng(gradient_base, static_cast<std::uint64_t>(i));
        reports.push_back(client_gradient_report(
            result.profiles[static_cast<std::size_t>(i)],
            result.model.poi_factors, epsilon2, rng));
        result.profiles[static_cast<std::size_t>(i)].ledger.gradient_spent +=
            epsilon2;
        result.profiles[static_cast<std::size_t>(i)].ledger.gradient_reports +=
            1;
      }
      server_update_poi_factors(reports, result.model, q_normalized, config, m,
                                group_size);
    }

    refresh_user_factors(result.profiles, result.model.poi_factors,
                         config.lambda);
    if (config.no_privacy) {
      const Eigen::MatrixXd preferences =
          build_preference_matrix(result.profiles, n);
      const Eigen::MatrixXd user_factors = build_user_matrix(result.profiles);
      TraceRow row;
      row.iteration = iteration + 1;
      row.p_rmse = rmse(preferences,
                        user_factors * result.model.poi_factors.transpose());
      row.q_rmse = rmse(q_normalized, result.model.poi_factors *
                                          result.model.poi_factors.transpose());
      result.trace.push_back(row);
    }
  }
  return result;
}

TrainResult train_npb(const std::vector<CheckinHistory>& training, int n,
                      const TrainConfig& config, std::uint64_t seed) {
  check_config(config);
  if (training.empty()) {
    throw std::invalid_argument("train_npb: need at least one client");
  }
  if (config.npb_epochs < 1 || !(config.npb_gamma > 0)) {
    throw std::invalid_argument("train_npb: bad SGD settings");
  }

  TrainResult result;
  result.profiles = make_profiles(training, n, config.d, seed);
  result.model = init_model(n, config.d, seed);

  // Observed cells only: (user, poi, normalized count).
  struct Observation {
    int user;
    int poi;
    double value;
  };
  std::vector<Observation> observations;
  for (std::size_t i = 0; i < result.profiles.size(); ++i) {
    for (const auto& [poi, value] : result.profiles[i].normalized_visits) {
      observations.push_back({static_cast<int>(i), poi, value});
    }
  }

  Rng order_rng = make_rng(seed, kSgdOrderStream);
  Eigen::MatrixXd& poi_factors = result.model.poi_factors;
  for (int epoch = 0; epoch < config.npb_epochs; ++epoch) {
    for (std::size_t i = observations.size(); i > 1; --i) {
      std::swap(observations[i - 1], observations[uniform_index(order_rng, i)]);
    }
    for (const auto& obs : observations) {
      Eigen::VectorXd& user = result.profiles[static_cast<std::size_t>(
          obs.user)].user_factors;
      const double error = obs.value - user.dot(poi_factors.row(obs.poi));
      const Eigen::VectorXd poi_row = poi_factors.row(obs.poi).transpose();
      user += config.npb_gamma *
              2.0 * (error * poi_row - config.lambda * user);
      poi_factors.row(obs.poi) +=
          config.npb_gamma *
          2.0 * (error * user - config.lambda * poi_row).transpose();
    }
  }
  return result;
}

TrainResult train_pb(const std::vector<CheckinHistory>& training, int n,
                     const TrainConfig& config, std::uint64_t seed) {
  check_config(config);
  if (training.empty()) {
    throw std::invalid_argument("train_pb: need at least one client");
  }
  if (!(config.budget.total_epsilon > 0)) {
    throw std::invalid_argument("train_pb: need a positive budget");
  }
  const int m = static_cast<int>(training.size());
  // The whole budget is split evenly across the gradient rounds.
  const double epsilon_per_round =
      config.budget.total_epsilon / config.iterations;

  TrainResult result;
  result.profiles = make_profiles(training, n, config.d, seed);
  result.model = init_model(n, config.d, seed);
  const std::uint64_t gradient_base = derive_seed(seed, kGradientStream);

  TrainConfig sgd_config = config;
  sgd_config.optimizer = Optimizer::kSgd;

  refresh_user_factors(result.profiles, result.model.poi_factors,
                       config.lambda);
  for (int iteration = 0; iteration < config.iterations; ++iteration) {
    std::vector<GradientReport> reports;
    reports.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
      Rng rng = make_rng(gradient_base,
                         static_cast<std::uint64_t>(iteration) *
                                 static_cast<std::uint64_t>(m) +
                             static_cast<std::uint64_t>(i));
      reports.push_back(client_gradient_report(
          result.profiles[static_cast<std::size_t>(i)],
          result.model.poi_factors, epsilon_per_round, rng));
      result.profiles[static_cast<std::size_t>(i)].ledger.gradient_spent +=
          epsilon_per_round;
      result.profiles[static_cast<std::size_t>(i)].ledger.gradient_reports +=
          1;
    }
    const Eigen::MatrixXd gradient =
        estimate_user_gradient_term(reports, n, config.d, 1.0) +
        2.0 * config.lambda * result.model.poi_factors;
    apply_gradient_step(result.model, gradient, sgd_config);
    refresh_user_factors(result.profiles, result.model.poi_factors,
                         config.lambda);
  }
  return result;
}

}  // namespace spirel
