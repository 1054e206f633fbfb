// Copyright 2026 The postgen Authors
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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "postgen/generation.h"
#include "postgen/scene.h"

namespace postgen
{

/// Weights of the three sub-costs and the normalizers of the centripetal and collision terms.
struct CostWeights
{
  double theta_acc = 1.0;
  double theta_centripetal = 1.0;
  double theta_collision = 1.0;
  double z1 = 1.0;
  double z2 = 1.0;

  /// Thetas finite and >= 0, normalizers finite and > 0. Throws ValidationError otherwise.
  void validate() const;

  /// z1 = n (v_ref^2 kappa_ref)^2 with v_ref = 15 m/s, kappa_ref = 0.05 1/m, and z2 = n,
  /// so each sub-cost is O(1) for an n-point trajectory.
  static CostWeights with_default_normalizers(std::size_t n_points);
};

/// Reads the weights file. Missing z1 / z2 fall back to with_default_normalizers(n_points).
CostWeights load_weights(const std::filesystem::path & path, std::size_t n_points);

struct CostBreakdown
{
  double c_acc = 0.0;
  double c_centripetal = 0.0;
  double c_collision = 0.0;
  double total = 0.0;
};

/// Sum of a_i^2.
double cost_acc(const CandidateTrajectory & traj);

/// (1 / z1) * sum of (v_i^2 kappa_i)^2.
double cost_centripetal(const CandidateTrajectory & traj, double z1);

/// (1 / z2) * sum of exp(-d_i^2), with d_i the distance to the ego plan at the point's
/// absolute time. An empty plan costs nothing.
double cost_collision(const CandidateTrajectory & traj, const EgoPlan * ego, double z2);

double weighted_total(const CostBreakdown & sub, const CostWeights & weights);

CostBreakdown total_cost(const CandidateTrajectory & traj, const EgoPlan * ego, const CostWeights & weights);

/// exp(-cost). Throws std::domain_error for negative or NaN cost.
double likelihood(double cost);

struct IntentionCandidates
{
  std::string intention_id;
  double prior = 0.0;
  std::vector<CandidateTrajectory> candidates;
};

struct CandidateScore
{
  std::string intention_id;
  /// Lane-sequence key of the candidate's path.
  std::string lanes;
  double accel = 0.0;
  CostBreakdown cost;
};

struct IntentionResult
{
  std::string intention_id;
  double prior = 0.0;
  double min_cost = 0.0;
  double likelihood = 0.0;
  double posterior = 0.0;
  std::size_t best_index = 0;
  CostBreakdown best_cost;
  CandidateTrajectory best_trajectory;
  /// Breakdown of every candidate, in input order.
  std::vector<CandidateScore> scores;
};

struct PredictionResult
{
  std::string obstacle_id;
  double anchor_time = 0.0;
  std::vector<IntentionResult> intentions;
  std::string selected_intention;
};

/// Index of the cheapest candidate. Ties go to the smaller |a| of the source profile,
/// then to the lower index.
std::size_t best_candidate(const std::vector<CandidateScore> & scores);

/// Posterior = prior * exp(-min_cost) / Z over intentions, computed with the smallest
/// min_cost factored out so Z never underflows. Throws ValidationError if an intention has
/// no candidates.
PredictionResult rank_intentions(const std::string & obstacle_id, double anchor_time,
                                 const std::vector<IntentionCandidates> & groups, const EgoPlan * ego,
                                 const CostWeights & weights);

}  // namespace postgen
