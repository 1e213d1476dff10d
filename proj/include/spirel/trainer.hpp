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

#ifndef SPIREL_TRAINER_HPP_
#define SPIREL_TRAINER_HPP_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "spirel/dataset.hpp"
#include "spirel/ldp.hpp"
#include "spirel/random.hpp"
#include "spirel/transition.hpp"

// Joint factorization of the user-POI matrix P and the transition matrix Q
// through a shared POI factor matrix V:
//
//   L = ||P - U V^T||^2 + ||Q - V V^T||^2 + lambda (||U||^2 + ||V||^2)
//
// User rows of U are solved client-side in closed form; V is updated
// server-side from perturbed per-client gradient reports (or exact terms in
// the diagnostic no-privacy mode). The NPB and PB baselines factorize P
// alone, without and with gradient perturbation.

namespace spirel {

struct AdamState {
  Eigen::MatrixXd first_moment;
  Eigen::MatrixXd second_moment;
  std::int64_t step = 0;
};

// Public POI factors (n x d) plus the server-side optimizer state.
struct LatentModel {
  Eigen::MatrixXd poi_factors;
  AdamState adam;

  int n() const { return static_cast<int>(poi_factors.rows()); }
  int d() const { return static_cast<int>(poi_factors.cols()); }
};

// Per-client audit trail of consumed privacy budget.
struct BudgetLedger {
  double transition_spent = 0;
  double gradient_spent = 0;
  int transition_reports = 0;
  int gradient_reports = 0;

  double total_spent() const { return transition_spent + gradient_spent; }
};

// Client-held state. The visit row never leaves the client; only perturbed
// reports derived from it do.
struct PrivateProfile {
  Eigen::VectorXd user_factors;
  VisitCountRow visits;
  // counts divided by the client's own maximum count, sorted by POI id;
  // empty when the client has no visits.
  std::vector<std::pair<int, double>> normalized_visits;
  BudgetLedger ledger;
};

// One perturbed gradient report: a single sampled latent dimension and, for
// every POI j, the value d * e_hat_j * u[dim] where e_hat_j is the
// PM-perturbed clamped prediction error.
struct GradientReport {
  int dim = 0;
  Eigen::VectorXd contributions;
};

enum class Optimizer { kAdam, kSgd };

struct TrainConfig {
  int d = 10;
  double lambda = 1e-8;
  double gamma = 1.0;
  int iterations = 10;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  PrivacyBudget budget{1.0, 0.5, 0.5};
  Optimizer optimizer = Optimizer::kAdam;
  double sigmoid_scale = 1.0;
  // Diagnostic mode: exact transition counts, exact gradient terms from all
  // clients every iteration, RMSE trace. Never the default.
  bool no_privacy = false;
  // Baseline settings.
  int npb_epochs = 100;
  double npb_gamma = 0.005;
};

struct TraceRow {
  int iteration = 0;
  double p_rmse = 0;
  double q_rmse = 0;
};

struct TrainResult {
  LatentModel model;
  TransitionMatrix transitions;  // empty for the baselines
  std::vector<PrivateProfile> profiles;
  std::vector<TraceRow> trace;  // filled in no-privacy mode only
};

// Entries i.i.d. uniform on [0, 1/sqrt(d)]; deterministic under the seed.
LatentModel init_model(int n, int d, std::uint64_t seed);
Eigen::VectorXd init_profile(int d, std::uint64_t seed);

// Builds the client state for one training history: visit counts, the
// max-normalized row and seeded initial factors.
PrivateProfile make_profile(const CheckinHistory& training, int d,
                            std::uint64_t seed);

// Closed-form ridge solve of the client's row against the public factors:
//   u^T = P_i V (V^T V + lambda I)^{-1}
// computed entirely client-side. Throws std::runtime_error when the system
// is numerically singular (lambda = 0 with rank-deficient V).
Eigen::VectorXd als_update_user(const PrivateProfile& profile,
                                const Eigen::MatrixXd& poi_factors,
                                double lambda);

// Samples one latent dimension, clamps every per-POI prediction error into
// [-1, 1], perturbs it with the piecewise mechanism at the full epsilon2
// budget and scales by d * u[dim]. Rejects diverged profiles
// (|u| components above 1e3).
GradientReport client_gradient_report(const PrivateProfile& profile,
                                      const Eigen::MatrixXd& poi_factors,
                                      double epsilon2, Rng& rng);

// Population-scaled estimate of the user gradient term
//   -2 sum_i u_i (r_ij - u_i^T v_j)
// from one group's reports: cell (j, t) sums contributions of reports whose
// sampled dimension is t, times -2 * population_scale.
Eigen::MatrixXd estimate_user_gradient_term(
    const std::vector<GradientReport>& reports, int n, int d,
    double population_scale);

// Exact counterparts used by the diagnostic mode and the test oracles.
Eigen::MatrixXd exact_user_gradient_term(const Eigen::MatrixXd& preferences,
                                         const Eigen::MatrixXd& user_factors,
                                         const Eigen::MatrixXd& poi_factors);
Eigen::MatrixXd transition_gradient_term(const Eigen::MatrixXd& q_normalized,
                                         const Eigen::MatrixXd& poi_factors);

// Full analytic gradient of the joint objective with respect to V, and the
// objective itself.
Eigen::MatrixXd joint_gradient_poi(const Eigen::MatrixXd& preferences,
                                   const Eigen::MatrixXd& user_factors,
                                   const Eigen::MatrixXd& q_normalized,
                                   const Eigen::MatrixXd& poi_factors,
                                   double lambda);
double joint_objective(const Eigen::MatrixXd& preferences,
                       const Eigen::MatrixXd& user_factors,
                       const Eigen::MatrixXd& q_normalized,
                       const Eigen::MatrixXd& poi_factors, double lambda);

// One optimizer step on the POI factors.
void apply_gradient_step(LatentModel& model, const Eigen::MatrixXd& gradient,
                         const TrainConfig& config);

// Combines one group's reports with the exact transition term and the
// regularizer, then steps the optimizer. group_size is the reporting group's
// size; the user term is rescaled by total_users / group_size.
// Throws std::runtime_error on an empty report list.
void server_update_poi_factors(const std::vector<GradientReport>& reports,
                               LatentModel& model,
                               const Eigen::MatrixXd& q_normalized,
                               const TrainConfig& config, int total_users,
                               int group_size);

// Random balanced partition into k groups (sizes differ by at most one);
// returns the group id per user. Throws std::invalid_argument when k is not
// in [1, user_count].
std::vector<int> partition_groups(int user_count, int k, std::uint64_t seed);

// Dense helpers over a profile collection.
Eigen::MatrixXd build_preference_matrix(
    const std::vector<PrivateProfile>& profiles, int n);
Eigen::MatrixXd build_user_matrix(const std::vector<PrivateProfile>& profiles);

// Full pipeline: transition collection at epsilon1, sigmoid normalization,
// then `iterations` rounds of client ALS updates, one group's gradient
// reports at epsilon2 and a server optimizer step. `training` holds the
// already-split training histories.
TrainResult train_spirel(const std::vector<CheckinHistory>& training, int n,
                         const TrainConfig& config, std::uint64_t seed);

// Non-private SGD factorization of the visit-count matrix over observed
// cells only.
TrainResult train_npb(const std::vector<CheckinHistory>& training, int n,
                      const TrainConfig& config, std::uint64_t seed);

// Private baseline: same model as NPB, but every client submits a perturbed
// gradient report each iteration at budget epsilon/iterations.
TrainResult train_pb(const std::vector<CheckinHistory>& training, int n,
                     const TrainConfig& config, std::uint64_t seed);

}  // namespace spirel

#endif  // SPIREL_TRAINER_HPP_
